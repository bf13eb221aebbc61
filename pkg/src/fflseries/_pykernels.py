"""Pure-Python (numpy) versions of the compiled kernels, same signatures."""

import numpy as np

_BATCH_ELEMS = 1 << 21


def conv(a, b, n, add, mul):
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int64)
    full = la + lb - 1
    if n < 0 or n > full:
        n = full
    if la > lb:
        a, b, la, lb = b, a, lb, la
    out = np.zeros(n, dtype=np.int64)
    for i in range(min(la, n)):
        ai = a[i]
        if ai == 0:
            continue
        lim = min(lb, n - i)
        seg = out[i:i + lim]
        out[i:i + lim] = add[seg, mul[ai, b[:lim]]]
    return out


def _batch_mul(x, y, add, mul):
    bsz, lx = x.shape
    ly = y.shape[1]
    out = np.zeros((bsz, lx + ly - 1), dtype=np.int64)
    for i in range(lx):
        seg = out[:, i:i + ly]
        out[:, i:i + ly] = add[seg, mul[x[:, i:i + 1], y]]
    return out


def _field_sum0(x, add):
    """Field sum over axis 0 by pairwise table reduction."""
    while x.shape[0] > 1:
        if x.shape[0] % 2:
            x = np.concatenate([x, np.zeros((1,) + x.shape[1:], dtype=np.int64)])
        x = add[x[0::2], x[1::2]]
    return x[0]


def monic_outer_sum(q, e, beta, j, start, stop, add, mul):
    lj, lb = j * e + 1, beta * e + 1
    acc = np.zeros((lj, lb), dtype=np.int64)
    if stop <= start:
        return acc
    top = max(j, beta)
    chunk = max(1, _BATCH_ELEMS // (lj * lb + top * e + 1))
    for lo in range(start, stop, chunk):
        idx = np.arange(lo, min(stop, lo + chunk), dtype=np.int64)
        a = np.empty((len(idx), e + 1), dtype=np.int64)
        r = idx.copy()
        for i in range(e):
            a[:, i] = r % q
            r //= q
        a[:, e] = 1
        cur = np.ones((len(idx), 1), dtype=np.int64)
        pj = cur if j == 0 else None
        pb = cur if beta == 0 else None
        for k in range(1, top + 1):
            cur = _batch_mul(cur, a, add, mul)
            if k == j:
                pj = cur
            if k == beta:
                pb = cur
        prod = mul[pj[:, :, None], pb[:, None, :]]
        acc = add[acc, _field_sum0(prod, add)]
    return acc
