"""Gaussian elimination over a table field (matrices of codes)."""

import numpy as np


def row_reduce(field, m):
    """Reduced row echelon form and pivot columns of a code matrix."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2 or a.size == 0:
        return a.reshape(max(a.shape[0] if a.ndim else 0, 0), -1) if a.ndim == 2 else a, []
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = field.vscale(a[r], field.inv(int(a[r, c])))
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = field.vsub(a[i], field.vscale(a[r], int(a[i, c])))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field, m):
    return len(row_reduce(field, m)[1])


def solve(field, a, b):
    """One solution x of a·x = b (free variables set to 0), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    rows, cols = a.shape if a.size else (len(b), 0)
    if cols == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    aug, pivots = row_reduce(field, np.hstack([a, b]))
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = aug[r, cols]
    return x


def mat_vec(field, m, v):
    """m·v for a code matrix and vector."""
    m = np.asarray(m, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if m.size == 0:
        return np.zeros(m.shape[0], dtype=np.int64)
    return field.vsum(field.vmul(m, v[None, :]), axis=1)
