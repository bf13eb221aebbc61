# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: table-driven polynomial products and monic power sums.

Coefficients are int64 field codes; ``add`` and ``mul`` are the Q x Q
tables of :class:`fflseries.scalars.Field`.
"""

import numpy as np
from libc.stdint cimport int64_t


cdef void _mul_into(const int64_t* a, Py_ssize_t la,
                    const int64_t* b, Py_ssize_t lb,
                    int64_t* out, Py_ssize_t n,
                    const int64_t[:, ::1] add, const int64_t[:, ::1] mul) noexcept nogil:
    cdef Py_ssize_t i, k, lim
    cdef int64_t ai, bk
    for i in range(n):
        out[i] = 0
    for i in range(la):
        if i >= n:
            break
        ai = a[i]
        if ai == 0:
            continue
        lim = lb
        if n - i < lim:
            lim = n - i
        for k in range(lim):
            bk = b[k]
            if bk != 0:
                out[i + k] = add[out[i + k], mul[ai, bk]]


def conv(const int64_t[::1] a, const int64_t[::1] b, Py_ssize_t n,
         const int64_t[:, ::1] add, const int64_t[:, ::1] mul):
    """Product of two coefficient vectors, truncated to length n (n < 0: full)."""
    cdef Py_ssize_t la = a.shape[0], lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(0, dtype=np.int64)
    full = la + lb - 1
    if n < 0 or n > full:
        n = full
    res = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] out = res
    with nogil:
        _mul_into(&a[0], la, &b[0], lb, &out[0], n, add, mul)
    return res


def monic_outer_sum(Py_ssize_t q, Py_ssize_t e, Py_ssize_t beta, Py_ssize_t j,
                    Py_ssize_t start, Py_ssize_t stop,
                    const int64_t[:, ::1] add, const int64_t[:, ::1] mul):
    """Sum over monics a of degree e (indices start..stop-1) of a^j (x) a^beta.

    Row index is the theta-degree of a^j, column index the t-degree of a^beta.
    Monic number idx has coefficient i equal to the i-th base-q digit of idx.
    """
    cdef Py_ssize_t lj = j * e + 1, lb = beta * e + 1
    cdef Py_ssize_t top = j if j > beta else beta
    cdef Py_ssize_t lmax = top * e + 1
    res = np.zeros((lj, lb), dtype=np.int64)
    cdef int64_t[:, ::1] acc = res
    a_arr = np.zeros(e + 1, dtype=np.int64)
    buf_arr = np.zeros(2 * lmax, dtype=np.int64)
    pj_arr = np.zeros(lj, dtype=np.int64)
    pb_arr = np.zeros(lb, dtype=np.int64)
    cdef int64_t[::1] av = a_arr, bufv = buf_arr, pjv = pj_arr, pbv = pb_arr
    cdef int64_t* a = &av[0]
    cdef int64_t* cur = &bufv[0]
    cdef int64_t* nxt = &bufv[lmax]
    cdef int64_t* pj = &pjv[0]
    cdef int64_t* pb = &pbv[0]
    cdef int64_t* tmp
    cdef Py_ssize_t idx, r, i, k, ln, u, v
    cdef int64_t x
    with nogil:
        a[e] = 1
        for idx in range(start, stop):
            r = idx
            for i in range(e):
                a[i] = r % q
                r = r // q
            # powers a^1 .. a^top, capturing a^j and a^beta
            cur[0] = 1
            ln = 1
            if j == 0:
                pj[0] = 1
            if beta == 0:
                pb[0] = 1
            for k in range(1, top + 1):
                _mul_into(cur, ln, a, e + 1, nxt, ln + e, add, mul)
                tmp = cur
                cur = nxt
                nxt = tmp
                ln = ln + e
                if k == j:
                    for i in range(ln):
                        pj[i] = cur[i]
                if k == beta:
                    for i in range(ln):
                        pb[i] = cur[i]
            for u in range(lj):
                x = pj[u]
                if x == 0:
                    continue
                for v in range(lb):
                    if pb[v] != 0:
                        acc[u, v] = add[acc[u, v], mul[x, pb[v]]]
    return res
