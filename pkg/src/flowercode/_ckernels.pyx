# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contracts as ``_pykernels``; bit sets must fit in 64 bits."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popcount64(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


cdef bint all_private(uint64_t* red, int* members, int k) noexcept nogil:
    cdef int a, b
    cdef uint64_t others
    for a in range(k):
        others = 0
        for b in range(k):
            if b != a:
                others |= red[members[b]]
        if (red[members[a]] & ~others) == 0:
            return False
    return True


cdef void dfs(uint64_t target, uint64_t* red, int* cand, int ncand, int start,
              int* members, int k, uint64_t union_, list out):
    cdef int pos, p
    cdef uint64_t m, u, sel
    for pos in range(start, ncand):
        m = red[pos]
        if (m & ~union_) == 0:
            continue
        members[k] = pos
        if not all_private(red, members, k + 1):
            continue
        u = union_ | m
        if u == target:
            sel = 0
            for p in range(k + 1):
                sel |= (<uint64_t>1) << cand[members[p]]
            out.append(sel)
        else:
            dfs(target, red, cand, ncand, pos + 1, members, k + 1, u, out)


def minimal_covers(target, masks):
    cdef uint64_t t = target
    cdef int n = len(masks)
    if n > 64:
        raise OverflowError("at most 64 candidate sets")
    if t == 0:
        return [0]
    cdef uint64_t red[64]
    cdef int cand[64]
    cdef int members[64]
    cdef int ncand = 0
    cdef uint64_t m
    cdef int k
    for k in range(n):
        m = <uint64_t>masks[k] & t
        if m:
            red[ncand] = m
            cand[ncand] = k
            ncand += 1
    out = []
    dfs(t, red, cand, ncand, 0, members, 0, 0, out)
    return out


def min_union_degree(masks, int need):
    cdef int n = len(masks)
    if n > 62:
        raise OverflowError("at most 62 sets")
    cdef uint64_t ms[62]
    cdef int i, k
    for i in range(n):
        ms[i] = <uint64_t>masks[i]
    cdef uint64_t sel, limit, c, r, u, bits
    cdef bint ok
    limit = (<uint64_t>1) << n
    for k in range(1, n + 1):
        ok = True
        sel = ((<uint64_t>1) << k) - 1
        while sel < limit:
            u = 0
            bits = sel
            while bits:
                i = __builtin_ctzll(bits)
                u |= ms[i]
                bits &= bits - 1
            if popcount64(u) < need:
                ok = False
                break
            # Gosper's hack: next mask with the same popcount
            c = sel & (~sel + 1)
            r = sel + c
            sel = (((r ^ sel) >> 2) // c) | r
        if ok:
            return k
    return n + 1


def gf_matmul(a, x, mul_table):
    cdef const uint8_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.uint8)
    cdef const uint8_t[:, ::1] X = np.ascontiguousarray(x, dtype=np.uint8)
    cdef const uint8_t[:, ::1] M = np.ascontiguousarray(mul_table, dtype=np.uint8)
    cdef Py_ssize_t rows = A.shape[0], inner = A.shape[1], cols = X.shape[1]
    out_arr = np.zeros((rows, cols), dtype=np.uint8)
    cdef uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, s
    cdef uint8_t c
    cdef const uint8_t* mrow
    with nogil:
        for i in range(rows):
            for j in range(inner):
                c = A[i, j]
                if c == 0:
                    continue
                mrow = &M[c, 0]
                for s in range(cols):
                    out[i, s] ^= mrow[X[j, s]]
    return out_arr
