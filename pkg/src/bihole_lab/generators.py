"""Seeded random and fixed bipartite graph constructions."""

import numpy as np

from . import kernels
from .graph import INDEX_DTYPE, BipartiteGraph, GraphError
from .rng import TAG_MIXED, TAG_RIGHT_REGULAR, Xoshiro256, bernoulli_threshold, derive_seed


def gnnp(n: int, p: float, seed: int) -> BipartiteGraph:
    """G(n, n, p): each of the n*n pairs independently with probability p.

    Pair ``(i, j)`` is decided by the ``j``-th draw of row ``i``'s stream
    ``derive_seed(seed, TAG_GNNP, i)``, so the seed fixes the graph exactly.
    """
    if n < 0:
        raise GraphError("n must be nonnegative")
    ptr, adj = kernels.gnnp_csr(n, bernoulli_threshold(p), seed)
    return BipartiteGraph(n, n, ptr, adj, _checked=True)


def full_star(n: int) -> BipartiteGraph:
    """Left vertex 0 joined to every right vertex; nothing else."""
    if n < 1:
        raise GraphError("full_star needs n >= 1")
    return BipartiteGraph.from_edges(n, n, [(0, j) for j in range(n)])


def complete(n: int) -> BipartiteGraph:
    ptr = np.arange(0, n * n + 1, n, dtype=INDEX_DTYPE) if n else np.zeros(1, INDEX_DTYPE)
    return BipartiteGraph(n, n, ptr, np.tile(np.arange(n, dtype=INDEX_DTYPE), n), _checked=True)


def empty(n: int) -> BipartiteGraph:
    return BipartiteGraph(n, n, np.zeros(n + 1, INDEX_DTYPE), np.zeros(0, INDEX_DTYPE), _checked=True)


def perfect_matching(n: int) -> BipartiteGraph:
    return BipartiteGraph(n, n, np.arange(n + 1, dtype=INDEX_DTYPE), np.arange(n, dtype=INDEX_DTYPE),
                          _checked=True)


def cycle(n: int) -> BipartiteGraph:
    """``u_i ~ v_i, v_{i+1 mod n}``; 2-regular for n >= 3."""
    return BipartiteGraph.from_edges(n, n, [(i, j) for i in range(n) for j in (i, (i + 1) % n)])


def _right_regular_edges(n: int, d: int, base: int, rights) -> np.ndarray:
    lefts, rs = [], []
    for v in rights:
        lefts.extend(Xoshiro256(derive_seed(base, v)).sample_distinct(n, d))
        rs.extend([v] * d)
    e = np.stack([np.asarray(lefts, INDEX_DTYPE), np.asarray(rs, INDEX_DTYPE)], axis=1).reshape(-1, 2)
    return e


def _from_pairs(n: int, e: np.ndarray) -> BipartiteGraph:
    e = e[np.lexsort((e[:, 1], e[:, 0]))]
    return BipartiteGraph._from_sorted_pairs(n, n, e[:, 0], e[:, 1])


def right_regular(n: int, d: int, seed: int) -> BipartiteGraph:
    """Every right vertex gets ``d`` distinct uniform left neighbours.

    Right vertex ``v`` draws from stream ``derive_seed(seed, TAG_RIGHT_REGULAR, v)``.
    Left degrees are Binomial(n, d/n) and unbounded.
    """
    if not 0 <= d <= n:
        raise GraphError(f"right degree {d} impossible with n={n}")
    return _from_pairs(n, _right_regular_edges(n, d, derive_seed(seed, TAG_RIGHT_REGULAR), range(n)))


def cap_max_degree(g: BipartiteGraph, cap: int) -> BipartiteGraph:
    """Delete edges at over-full vertices until every degree is at most ``cap``.

    Deterministic: each left vertex keeps its ``cap`` lowest-index
    neighbours, then each right vertex does the same on what is left.
    Vertices already within the cap are untouched by their own pass.
    """
    if cap < 0:
        raise GraphError("cap must be nonnegative")
    e = g.edges()
    # rank of each edge inside its left row
    rank_l = np.arange(len(e)) - np.repeat(g.left_ptr[:-1], np.diff(g.left_ptr))
    e = e[rank_l < cap]
    order = np.lexsort((e[:, 0], e[:, 1]))
    by_right = e[order]
    starts = np.searchsorted(by_right[:, 1], np.arange(g.right_count))
    rank_r = np.arange(len(by_right)) - starts[by_right[:, 1]]
    kept = by_right[rank_r < cap]
    kept = kept[np.lexsort((kept[:, 1], kept[:, 0]))]
    return BipartiteGraph._from_sorted_pairs(g.left_count, g.right_count, kept[:, 0], kept[:, 1])


def planted_hubs(n: int, base_degree: float, hub_fraction: float, hub_degree: int, seed: int) -> BipartiteGraph:
    """Sparse G(n, n, base_degree/n) with a block of high-degree right "hubs".

    The last ``round(hub_fraction * n)`` right vertices are replaced by
    vertices of degree exactly ``hub_degree`` (uniform distinct left
    neighbours).  The result is then capped at ``hub_degree``.  Used to get
    instances where few right vertices exhaust their colour lists.
    """
    if not 0 <= hub_degree <= n:
        raise GraphError(f"hub degree {hub_degree} impossible with n={n}")
    hubs = int(round(hub_fraction * n))
    e = gnnp(n, min(1.0, base_degree / n), seed).edges()
    e = e[e[:, 1] < n - hubs]
    h = _right_regular_edges(n, hub_degree, derive_seed(seed, TAG_MIXED), range(n - hubs, n))
    return cap_max_degree(_from_pairs(n, np.concatenate([e, h])), hub_degree)
