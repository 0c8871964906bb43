"""Pure-Python / numpy implementations of the hot kernels.

These define the reference behaviour; the compiled ``_kernels`` extension
must return identical arrays for identical arguments.  Streams that run
side by side (one per gnnp row, one per coupon trial) are advanced in
lock-step with vectorised xoshiro256** updates.
"""

from collections import deque

import numpy as np

from .rng import GOLDEN, MASK64, TAG_COUPON, TAG_GNNP, derive_seed

BACKEND = "python"

_U64 = np.uint64
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_GOLD = _U64(GOLDEN)


def _mix64(x: np.ndarray) -> np.ndarray:
    z = x + _GOLD
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _stream_states(base: int, count: int):
    """xoshiro states for ``derive_seed(base, i)``, ``i < count``."""
    idx = np.arange(count, dtype=_U64)
    seeds = _mix64(_U64(base) ^ idx)
    return [_mix64(seeds + _U64((k * GOLDEN) & MASK64)) for k in range(4)]


def _rotl(x, k):
    return (x << _U64(k)) | (x >> _U64(64 - k))


def _step(s):
    """Advance every stream once; returns the outputs."""
    s0, s1, s2, s3 = s
    out = _rotl(s1 * _U64(5), 7) * _U64(9)
    t = s1 << _U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s[3] = _rotl(s3, 45)
    return out


def gnnp_csr(n: int, threshold: int, seed: int):
    """Left CSR of G(n, n, p) with ``p = threshold / 2**53``; row ``i`` uses its own stream."""
    if n == 0:
        return np.zeros(1, np.int64), np.zeros(0, np.int64)
    s = _stream_states(derive_seed(seed, TAG_GNNP), n)
    thr = _U64(threshold)
    shift = _U64(11)
    rows, cols = [], []
    with np.errstate(over="ignore"):
        for j in range(n):
            hit = np.flatnonzero((_step(s) >> shift) < thr)
            if hit.size:
                rows.append(hit)
                cols.append(np.full(hit.size, j, np.int64))
    if not rows:
        return np.zeros(n + 1, np.int64), np.zeros(0, np.int64)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    order = np.argsort(r, kind="stable")
    counts = np.bincount(r, minlength=n)
    ptr = np.zeros(n + 1, np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, c[order]


def coupon_times(q: int, trials: int, seed: int, block: int = 8192) -> np.ndarray:
    """Number of uniform draws from ``q`` colors needed to see all of them, per trial."""
    out = np.zeros(trials, np.int64)
    base = derive_seed(seed, TAG_COUPON)
    qq = _U64(q)
    for start in range(0, trials, block):
        m = min(block, trials - start)
        idx = np.arange(start, start + m, dtype=_U64)
        seeds = _mix64(_U64(base) ^ idx)
        s = [_mix64(seeds + _U64((k * GOLDEN) & MASK64)) for k in range(4)]
        pos = np.arange(m)
        seen = np.zeros((m, q), dtype=bool)
        missing = np.full(m, q, np.int64)
        t = 0
        with np.errstate(over="ignore"):
            while pos.size:
                t += 1
                d = (((_step(s) >> _U64(32)) * qq) >> _U64(32)).astype(np.int64)
                rows = np.arange(pos.size)
                new = ~seen[rows, d]
                seen[rows[new], d[new]] = True
                missing[new] -= 1
                done = missing == 0
                if done.any():
                    out[start + pos[done]] = t
                    keep = ~done
                    pos = pos[keep]
                    s = [x[keep] for x in s]
                    seen = seen[keep]
                    missing = missing[keep]
    return out


def _first_non_neighbor(r, nxt, adj, k, end):
    """Walk the linked list from ``r``; skip entries present in sorted ``adj``."""
    na = len(adj)
    while r != end:
        while k < na and adj[k] < r:
            k += 1
        if k < na and adj[k] == r:
            r = nxt[r]
            continue
        return r, k
    return end, k


def complement_matching(n: int, ptr: np.ndarray, adj: np.ndarray) -> np.ndarray:
    """Maximum matching of the bipartite complement of a balanced ``n x n`` graph.

    ``ptr/adj`` is the left CSR of the graph itself.  Returns ``match_left``
    (-1 where unmatched).  Greedy start (first free non-neighbour in index
    order), then phases: BFS forest from all free left vertices over the
    implicit complement, augment along vertex-disjoint tree paths in
    discovery order.  Unvisited right vertices sit in a linked list, so a
    scan from ``x`` costs ``O(deg(x) + removed)``.
    """
    ptr_l = ptr.tolist()
    flat = adj.tolist()
    nbrs = [flat[ptr_l[i]:ptr_l[i + 1]] for i in range(n)]
    end = n
    match_l = [-1] * n
    match_r = [-1] * n

    nxt = list(range(1, n + 1)) + [end]   # index n is the head sentinel
    prv = [end] + list(range(n))
    nxt[end] = 0 if n else end

    def unlink(r):
        p, q = prv[r], nxt[r]
        nxt[p] = q
        if q != end:
            prv[q] = p

    for u in range(n):
        r, _ = _first_non_neighbor(nxt[end], nxt, nbrs[u], 0, end)
        if r != end:
            match_l[u] = r
            match_r[r] = u
            unlink(r)

    while True:
        roots = [u for u in range(n) if match_l[u] == -1]
        if not roots:
            break
        nxt = list(range(1, n + 1)) + [end]
        prv = [end] + list(range(n))
        nxt[end] = 0 if n else end
        parent = [-1] * n
        found = []
        queue = deque(roots)
        while queue:
            x = queue.popleft()
            a = nbrs[x]
            k = 0
            r = nxt[end]
            while True:
                r, k = _first_non_neighbor(r, nxt, a, k, end)
                if r == end:
                    break
                nr = nxt[r]
                unlink(r)
                parent[r] = x
                if match_r[r] == -1:
                    found.append(r)
                else:
                    queue.append(match_r[r])
                r = nr
        if not found:
            break
        used = [False] * n
        for r in found:
            path = []
            cur = r
            while True:
                x = parent[cur]
                if used[x]:
                    path = None
                    break
                path.append((x, cur))
                if match_l[x] == -1:
                    break
                cur = match_l[x]
            if path is None:
                continue
            for x, rr in path:
                used[x] = True
                match_l[x] = rr
                match_r[rr] = x
    return np.asarray(match_l, dtype=np.int64)
