# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled subsumption search (at most 64 events); see ``_pysubsume``."""

from libc.stdint cimport uint64_t

cdef enum:
    MAXN = 64


cdef extern from *:
    int __builtin_popcountll(unsigned long long)


cdef inline int _popcount(uint64_t x):
    return __builtin_popcountll(x)


def find_subsumption(src_labels, src_preds, dst_labels, dst_preds):
    cdef int n = len(src_labels)
    if n != len(dst_labels):
        return None
    if n > MAXN:
        from ckaclose._pysubsume import find_subsumption as slow
        return slow(src_labels, src_preds, dst_labels, dst_preds)
    if sorted(src_labels) != sorted(dst_labels):
        return None

    cdef int slab[MAXN]
    cdef int dlab[MAXN]
    cdef uint64_t spred[MAXN]
    cdef uint64_t dpred[MAXN]
    cdef int ssucc[MAXN]
    cdef int dsucc[MAXN]
    cdef int cand[MAXN][MAXN]
    cdef int ncand[MAXN]
    cdef int h[MAXN]
    cdef int pos[MAXN]
    cdef int i, j, k
    cdef uint64_t used = 0, need, m

    for i in range(n):
        slab[i] = src_labels[i]
        dlab[i] = dst_labels[i]
        spred[i] = <uint64_t>src_preds[i]
        dpred[i] = <uint64_t>dst_preds[i]
        ssucc[i] = 0
        dsucc[i] = 0
    for i in range(n):
        for j in range(n):
            if (spred[j] >> i) & 1:
                ssucc[i] += 1
            if (dpred[j] >> i) & 1:
                dsucc[i] += 1
    for i in range(n):
        ncand[i] = 0
        for j in range(n):
            if (dlab[j] == slab[i] and _popcount(dpred[j]) >= _popcount(spred[i])
                    and dsucc[j] >= ssucc[i]):
                cand[i][ncand[i]] = j
                ncand[i] += 1
        if ncand[i] == 0:
            return None
        h[i] = -1
        pos[i] = 0

    i = 0
    while i >= 0:
        if i == n:
            return [h[k] for k in range(n)]
        if h[i] >= 0:
            used &= ~((<uint64_t>1) << h[i])
            h[i] = -1
        need = 0
        for k in range(i):
            if (spred[i] >> k) & 1:
                need |= (<uint64_t>1) << h[k]
        k = pos[i]
        while k < ncand[i]:
            j = cand[i][k]
            k += 1
            if not ((used >> j) & 1) and (dpred[j] & need) == need:
                h[i] = j
                used |= (<uint64_t>1) << j
                break
        pos[i] = k
        if h[i] >= 0:
            i += 1
            if i < n:
                pos[i] = 0
        else:
            pos[i] = 0
            i -= 1
    return None
