# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

from .rng import TAG_COUPON, TAG_GNNP, derive_seed

cnp.import_array()

BACKEND = "compiled"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t mix64(uint64_t x) nogil:
    cdef uint64_t z = x + GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef struct Xo:
    uint64_t s0, s1, s2, s3


cdef inline void xo_seed(Xo* st, uint64_t seed) nogil:
    st.s0 = mix64(seed)
    st.s1 = mix64(seed + GOLDEN)
    st.s2 = mix64(seed + 2 * GOLDEN)
    st.s3 = mix64(seed + 3 * GOLDEN)


cdef inline uint64_t xo_next(Xo* st) nogil:
    cdef uint64_t result = rotl(st.s1 * 5, 7) * 9
    cdef uint64_t t = st.s1 << 17
    st.s2 ^= st.s0
    st.s3 ^= st.s1
    st.s1 ^= st.s2
    st.s0 ^= st.s3
    st.s2 ^= t
    st.s3 = rotl(st.s3, 45)
    return result


def gnnp_csr(Py_ssize_t n, object threshold, object seed):
    cdef uint64_t thr = <uint64_t>int(threshold)
    cdef uint64_t base = <uint64_t>derive_seed(int(seed), TAG_GNNP)
    cdef cnp.ndarray[int64_t, ndim=1] ptr = np.zeros(n + 1, dtype=np.int64)
    cdef Py_ssize_t cap = 1024
    cdef double expect = <double>n * <double>n * (<double>thr / 9007199254740992.0)
    if expect > 0:
        cap = <Py_ssize_t>(expect + 10.0 * (expect ** 0.5) + 1024)
    cdef cnp.ndarray[int64_t, ndim=1] adj = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] adj_v = adj
    cdef int64_t[::1] ptr_v = ptr
    cdef Py_ssize_t i, j, m = 0
    cdef Xo st
    for i in range(n):
        xo_seed(&st, mix64(base ^ <uint64_t>i))
        for j in range(n):
            if (xo_next(&st) >> 11) < thr:
                if m == cap:
                    cap = cap * 2
                    adj = np.resize(adj, cap)
                    adj_v = adj
                adj_v[m] = j
                m += 1
        ptr_v[i + 1] = m
    return ptr, adj[:m].copy()


def coupon_times(Py_ssize_t q, Py_ssize_t trials, object seed):
    cdef uint64_t base = <uint64_t>derive_seed(int(seed), TAG_COUPON)
    cdef cnp.ndarray[int64_t, ndim=1] out = np.zeros(trials, dtype=np.int64)
    cdef int64_t[::1] out_v = out
    cdef unsigned char* seen = <unsigned char*>malloc(q if q > 0 else 1)
    cdef Py_ssize_t i, missing, t, d
    cdef uint64_t qq = <uint64_t>q
    cdef Xo st
    if seen == NULL:
        raise MemoryError()
    try:
        for i in range(trials):
            xo_seed(&st, mix64(base ^ <uint64_t>i))
            memset(seen, 0, q)
            missing = q
            t = 0
            while missing > 0:
                t += 1
                d = <Py_ssize_t>(((xo_next(&st) >> 32) * qq) >> 32)
                if not seen[d]:
                    seen[d] = 1
                    missing -= 1
            out_v[i] = t
    finally:
        free(seen)
    return out


cdef inline Py_ssize_t first_non_neighbor(Py_ssize_t r, int64_t* nxt, const int64_t* adj,
                                          Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t* k,
                                          Py_ssize_t end) nogil:
    cdef Py_ssize_t kk = k[0]
    while r != end:
        while kk < hi and adj[kk] < r:
            kk += 1
        if kk < hi and adj[kk] == r:
            r = nxt[r]
            continue
        k[0] = kk
        return r
    k[0] = kk
    return end


cdef inline void reset_list(int64_t* nxt, int64_t* prv, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    for i in range(n):
        nxt[i] = i + 1
        prv[i] = i - 1 if i > 0 else n
    nxt[n] = 0 if n > 0 else n


cdef inline void unlink(int64_t* nxt, int64_t* prv, Py_ssize_t r, Py_ssize_t end) nogil:
    cdef int64_t p = prv[r]
    cdef int64_t q = nxt[r]
    nxt[p] = q
    if q != end:
        prv[q] = p


def complement_matching(Py_ssize_t n, object ptr_in, object adj_in):
    cdef cnp.ndarray[int64_t, ndim=1] ptr_a = np.ascontiguousarray(ptr_in, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] adj_a = np.ascontiguousarray(adj_in, dtype=np.int64)
    cdef const int64_t* ptr = <const int64_t*>ptr_a.data
    cdef const int64_t* adj = <const int64_t*>adj_a.data
    cdef cnp.ndarray[int64_t, ndim=1] ml_a = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] buf = np.empty(6 * n + 2, dtype=np.int64)
    cdef int64_t* match_l = <int64_t*>ml_a.data
    cdef int64_t* match_r = <int64_t*>buf.data
    cdef int64_t* nxt = match_r + n
    cdef int64_t* prv = nxt + n + 1
    cdef int64_t* parent = prv + n + 1
    cdef int64_t* queue = parent + n
    cdef int64_t* found = queue + n
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] used_a = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t* used = <cnp.uint8_t*>used_a.data
    cdef cnp.ndarray[int64_t, ndim=1] path_a = np.empty(2 * n + 2, dtype=np.int64)
    cdef int64_t* path = <int64_t*>path_a.data
    cdef Py_ssize_t end = n
    cdef Py_ssize_t u, r, nr, x, k, qh, qt, nfound, f, cur, plen, i, nroots
    cdef bint blocked
    with nogil:
        for i in range(n):
            match_r[i] = -1
        reset_list(nxt, prv, n)
        for u in range(n):
            k = ptr[u]
            r = first_non_neighbor(nxt[end], nxt, adj, ptr[u], ptr[u + 1], &k, end)
            if r != end:
                match_l[u] = r
                match_r[r] = u
                unlink(nxt, prv, r, end)
        while True:
            qh = 0
            qt = 0
            for u in range(n):
                if match_l[u] == -1:
                    queue[qt] = u
                    qt += 1
            if qt == 0:
                break
            reset_list(nxt, prv, n)
            for i in range(n):
                parent[i] = -1
            nfound = 0
            while qh < qt:
                x = queue[qh]
                qh += 1
                k = ptr[x]
                r = nxt[end]
                while True:
                    r = first_non_neighbor(r, nxt, adj, ptr[x], ptr[x + 1], &k, end)
                    if r == end:
                        break
                    nr = nxt[r]
                    unlink(nxt, prv, r, end)
                    parent[r] = x
                    if match_r[r] == -1:
                        found[nfound] = r
                        nfound += 1
                    else:
                        queue[qt] = match_r[r]
                        qt += 1
                    r = nr
            if nfound == 0:
                break
            for i in range(n):
                used[i] = 0
            for f in range(nfound):
                cur = found[f]
                plen = 0
                blocked = False
                while True:
                    x = parent[cur]
                    if used[x]:
                        blocked = True
                        break
                    path[2 * plen] = x
                    path[2 * plen + 1] = cur
                    plen += 1
                    if match_l[x] == -1:
                        break
                    cur = match_l[x]
                if blocked:
                    continue
                for i in range(plen):
                    x = path[2 * i]
                    cur = path[2 * i + 1]
                    used[x] = 1
                    match_l[x] = cur
                    match_r[cur] = x
    return ml_a
