# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Gaussian elimination modulo a prime below 2**31 on int64 arrays."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 mulsub_mod(i64 x, i64 f, i64 y, i64 p, double invp) nogil:
    # (x + f*y) mod p for x, f, y in [0, p) and p < 2**31; the float quotient
    # is off by at most a couple of units, corrected below
    cdef i64 s = x + f * y
    cdef i64 q = <i64>(<double>s * invp)
    cdef i64 r = s - q * p
    while r < 0:
        r += p
    while r >= p:
        r -= p
    return r


def rank_mod_p(i64[:, ::1] a, i64 p):
    """Rank of ``a`` modulo ``p``; ``a`` is overwritten with an echelon form.

    Entries must lie in ``[0, p)``.  Only the nonzero columns of each pivot
    row are touched when clearing below it, which keeps sparse inputs cheap.
    """
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, piv, nnz
    cdef i64 inv, f, t
    cdef double invp = 1.0 / <double>p
    cdef i64[::1] jj = np.empty(n, dtype=np.int64)
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = pow(int(a[r, c]), -1, int(p))
        nnz = 0
        for j in range(c, n):
            if a[r, j] != 0:
                a[r, j] = a[r, j] * inv % p
                jj[nnz] = j
                nnz += 1
        for i in range(r + 1, m):
            f = a[i, c]
            if f == 0:
                continue
            f = p - f
            for k in range(nnz):
                j = jj[k]
                a[i, j] = mulsub_mod(a[i, j], f, a[r, j], p, invp)
        r += 1
    return r


def rref_mod_p(i64[:, ::1] a, i64 p):
    """Reduced row echelon form of ``a`` modulo ``p`` in place; returns pivot columns."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, piv, nnz
    cdef i64 inv, f, t
    cdef double invp = 1.0 / <double>p
    cdef i64[::1] jj = np.empty(n, dtype=np.int64)
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = pow(int(a[r, c]), -1, int(p))
        nnz = 0
        for j in range(c, n):
            if a[r, j] != 0:
                a[r, j] = a[r, j] * inv % p
                jj[nnz] = j
                nnz += 1
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            f = p - f
            for k in range(nnz):
                j = jj[k]
                a[i, j] = mulsub_mod(a[i, j], f, a[r, j], p, invp)
        pivots.append(c)
        r += 1
    return pivots
