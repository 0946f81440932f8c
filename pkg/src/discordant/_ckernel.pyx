# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_pykernel.py`` for the reference semantics."""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free
from numpy.random cimport bitgen_t

import numpy as np

cdef int PUSH = 0
cdef int PULL = 1
cdef int OBLIVIOUS = 2


cdef struct State:
    const int64_t *ip
    const int64_t *ix
    const int64_t *eid
    signed char *ops
    int64_t *dc
    int64_t *dl
    int64_t *dp
    int64_t *kl
    int64_t *kp
    int64_t nd
    int64_t nk


cdef inline void d_add(State *s, int64_t x) noexcept nogil:
    s.dp[x] = s.nd
    s.dl[s.nd] = x
    s.nd += 1


cdef inline void d_del(State *s, int64_t x) noexcept nogil:
    cdef int64_t i = s.dp[x]
    s.nd -= 1
    cdef int64_t last = s.dl[s.nd]
    if last != x:
        s.dl[i] = last
        s.dp[last] = i
    s.dp[x] = -1


cdef inline void flip(State *s, int64_t x) noexcept nogil:
    cdef int64_t k, w, e, i, last
    s.ops[x] ^= 1
    cdef signed char ox = s.ops[x]
    for k in range(s.ip[x], s.ip[x + 1]):
        w = s.ix[k]
        e = s.eid[k]
        if s.ops[w] != ox:
            s.dc[w] += 1
            s.dc[x] += 1
            s.kp[e] = s.nk
            s.kl[s.nk] = e
            s.nk += 1
            if s.dc[w] == 1:
                d_add(s, w)
        else:
            s.dc[w] -= 1
            s.dc[x] -= 1
            i = s.kp[e]
            s.nk -= 1
            last = s.kl[s.nk]
            if last != e:
                s.kl[i] = last
                s.kp[last] = i
            s.kp[e] = -1
            if s.dc[w] == 0:
                d_del(s, w)
    if s.dc[x] != 0 and s.dp[x] < 0:
        d_add(s, x)
    elif s.dc[x] == 0 and s.dp[x] >= 0:
        d_del(s, x)


def run(const int64_t[::1] indptr, const int64_t[::1] indices, const int64_t[::1] edge_ids,
        const int64_t[::1] eu, const int64_t[::1] ev, signed char[::1] opinions,
        int proto, object bitgen, int64_t cutoff, trace=None):
    """Run one trajectory in place on ``opinions``; return ``(steps, |K| left)``."""
    if trace is not None:
        raise ValueError("tracing is only supported by the pure-Python kernel")
    capsule = bitgen.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid bit generator capsule")
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")

    cdef int64_t n = opinions.shape[0]
    cdef int64_t m = eu.shape[0]
    cdef State s
    s.ip = &indptr[0]
    s.ix = &indices[0] if indices.shape[0] else NULL
    s.eid = &edge_ids[0] if edge_ids.shape[0] else NULL
    s.ops = &opinions[0]
    s.dc = <int64_t *> malloc(n * sizeof(int64_t))
    s.dl = <int64_t *> malloc(n * sizeof(int64_t))
    s.dp = <int64_t *> malloc(n * sizeof(int64_t))
    s.kl = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    s.kp = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    s.nd = 0
    s.nk = 0
    cdef int64_t v, e, i, j, k, size, dd, active = -1, change = -1, w
    cdef int64_t t = 0
    cdef double u1, u2
    cdef signed char oa
    try:
        for v in range(n):
            s.dc[v] = 0
            s.dp[v] = -1
        for e in range(m):
            s.kp[e] = -1
            if s.ops[eu[e]] != s.ops[ev[e]]:
                s.kp[e] = s.nk
                s.kl[s.nk] = e
                s.nk += 1
                s.dc[eu[e]] += 1
                s.dc[ev[e]] += 1
        for v in range(n):
            if s.dc[v]:
                d_add(&s, v)
        with bitgen.lock, nogil:
            while s.nk > 0 and t < cutoff:
                u1 = rng.next_double(rng.state)
                u2 = rng.next_double(rng.state)
                if proto == OBLIVIOUS:
                    size = s.nk
                    i = <int64_t> (u1 * size)
                    if i >= size:
                        i = size - 1
                    e = s.kl[i]
                    if u2 < 0.5:
                        change = eu[e]
                        active = ev[e]
                    else:
                        change = ev[e]
                        active = eu[e]
                else:
                    size = s.nd
                    i = <int64_t> (u1 * size)
                    if i >= size:
                        i = size - 1
                    active = s.dl[i]
                    dd = s.dc[active]
                    j = <int64_t> (u2 * dd)
                    if j >= dd:
                        j = dd - 1
                    oa = s.ops[active]
                    w = -1
                    for k in range(s.ip[active], s.ip[active + 1]):
                        if s.ops[s.ix[k]] != oa:
                            if j == 0:
                                w = s.ix[k]
                                break
                            j -= 1
                    if proto == PUSH:
                        change = w
                    else:
                        change = active
                flip(&s, change)
                t += 1
        return t, s.nk
    finally:
        free(s.dc)
        free(s.dl)
        free(s.dp)
        free(s.kl)
        free(s.kp)


def cut_ratios(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] eweight,
               const double[::1] vweight, double[::1] out):
    """Gray-code sweep over subsets of vertices ``0..n-2``; see ``_pykernel.cut_ratios``."""
    cdef int64_t n = vweight.shape[0]
    cdef int64_t total_masks = (<int64_t> 1) << (n - 1)
    cdef char *ins = <char *> malloc(n)
    cdef double total = 0.0, cut = 0.0, a = 0.0, delta, other
    cdef int64_t i, g, prev = 0, diff, v, k
    try:
        for v in range(n):
            ins[v] = 0
            total += vweight[v]
        out[0] = float("inf")
        with nogil:
            for i in range(1, total_masks):
                g = i ^ (i >> 1)
                diff = g ^ prev
                prev = g
                v = 0
                while diff > 1:
                    diff >>= 1
                    v += 1
                delta = 0.0
                for k in range(indptr[v], indptr[v + 1]):
                    if ins[indices[k]]:
                        delta -= eweight[k]
                    else:
                        delta += eweight[k]
                if ins[v]:
                    ins[v] = 0
                    cut -= delta
                    a -= vweight[v]
                else:
                    ins[v] = 1
                    cut += delta
                    a += vweight[v]
                other = total - a
                out[g] = cut / (a if a < other else other)
    finally:
        free(ins)
