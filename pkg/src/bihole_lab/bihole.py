"""Randomized search for a large bi-hole in a balanced bipartite graph.

Algorithm (natural log throughout):

1. ``D = |E| / n``.  If ``D <= e`` the sampling probability below is not
   meaningful, so a greedy pass is used instead.
2. Remove the ``ceil(eps^2 n)`` highest-degree vertices from each side.
3. Put each surviving left vertex into ``X`` independently with
   probability ``min(1, (1 - eps/2) ln D / D)``.
4. ``Y`` = surviving right vertices with no neighbour in ``X``.
5. Drop the lowest-index surplus vertices of the larger set.

Attempts are repeated (fresh stream per attempt) until the size reaches
``ceil((1 - eps) ln D / D * n)`` or the retry budget runs out.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .graph import BipartiteGraph, GraphError, average_degree, describe, trim_high_degree
from .report import TrialReport
from .rng import TAG_BIHOLE, Xoshiro256, bernoulli_threshold, derive_seed


@dataclass(frozen=True)
class BiHole:
    left_set: tuple[int, ...]
    right_set: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.left_set)


@dataclass(frozen=True)
class BiholeParams:
    epsilon: float
    retries: int = 3
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.retries < 0:
            raise ValueError("retries must be nonnegative")


def log_ratio(delta: float) -> float:
    """``ln D / D`` for ``D > e``; frozen at its maximum ``1/e`` below that."""
    if delta <= math.e:
        return 1.0 / math.e
    return math.log(delta) / delta


def bihole_target(n: int, delta: float, epsilon: float) -> int:
    return math.ceil(round((1.0 - epsilon) * log_ratio(delta) * n, 9))


def verify_bihole(g: BipartiteGraph, bh: BiHole) -> bool:
    X = np.asarray(bh.left_set, dtype=np.int64)
    Y = np.asarray(bh.right_set, dtype=np.int64)
    if X.size and (X.min() < 0 or X.max() >= g.left_count):
        raise GraphError("bi-hole left index out of range")
    if Y.size and (Y.min() < 0 or Y.max() >= g.right_count):
        raise GraphError("bi-hole right index out of range")
    if len(set(bh.left_set)) != X.size or len(set(bh.right_set)) != Y.size:
        return False
    if X.size != Y.size:
        return False
    if X.size == 0:
        return True
    in_y = np.zeros(g.right_count, dtype=bool)
    in_y[Y] = True
    return not any(in_y[g.neighbors_left(int(u))].any() for u in X)


def _balance(X: np.ndarray, Y: np.ndarray):
    t = min(X.size, Y.size)
    # both arrays are sorted; discard the lowest-index surplus
    return X[X.size - t:], Y[Y.size - t:]


def _uncovered(g: BipartiteGraph, chosen: np.ndarray) -> np.ndarray:
    mark = np.zeros(g.left_count, dtype=bool)
    mark[chosen] = True
    edge_on = np.repeat(mark, np.diff(g.left_ptr))
    covered = np.zeros(g.right_count, dtype=bool)
    covered[g.left_adj[edge_on]] = True
    return np.flatnonzero(~covered)


def _greedy(g: BipartiteGraph):
    """Add left vertices by increasing degree; keep the best prefix."""
    n = g.left_count
    order = np.lexsort((np.arange(n), g.left_degrees()))
    covered = np.zeros(g.right_count, dtype=bool)
    ncov = 0
    best_t, best_k = 0, 0
    for k, u in enumerate(order.tolist(), start=1):
        nb = g.neighbors_left(u)
        fresh = nb[~covered[nb]]
        covered[fresh] = True
        ncov += fresh.size
        t = min(k, g.right_count - ncov)
        if t > best_t:
            best_t, best_k = t, k
    X = np.sort(order[:best_k])
    return X, _uncovered(g, X)


def find_bihole(g: BipartiteGraph, params: BiholeParams) -> tuple[BiHole, TrialReport]:
    if not g.is_balanced:
        raise GraphError(f"graph is not balanced ({g.left_count}x{g.right_count})")
    if g.left_count == 0:
        raise GraphError("graph has no vertices")
    start = time.perf_counter()
    n = g.left_count
    eps = params.epsilon
    delta = float(average_degree(g))
    target = bihole_target(n, delta, eps)
    metrics: dict = {"target": target}

    if delta <= math.e:
        X, Y = _greedy(g)
        metrics.update(method="greedy", attempts=1, u_prime=int(X.size), v_prime=int(Y.size))
        X, Y = _balance(X, Y)
    else:
        k = math.ceil(round(eps * eps * n, 9))
        trimmed, removed_l, removed_r = trim_high_degree(g, k)
        left_map = np.setdiff1d(np.arange(n), np.fromiter(removed_l, np.int64, len(removed_l)))
        right_map = np.setdiff1d(np.arange(n), np.fromiter(removed_r, np.int64, len(removed_r)))
        prob = min(1.0, (1.0 - eps / 2.0) * math.log(delta) / delta)
        thr = bernoulli_threshold(prob)
        best = None
        sizes = []
        for attempt in range(params.retries + 1):
            rng = Xoshiro256(derive_seed(params.seed, TAG_BIHOLE, attempt))
            chosen = np.fromiter((u for u in range(trimmed.left_count) if rng.bernoulli(thr)), np.int64)
            free = _uncovered(trimmed, chosen)
            sizes.append([int(chosen.size), int(free.size)])
            bx, by = _balance(chosen, free)
            if best is None or bx.size > best[0].size:
                best = (bx, by, attempt)
            if bx.size >= target:
                break
        X, Y = left_map[best[0]], right_map[best[1]]
        metrics.update(method="sample", attempts=len(sizes), best_attempt=best[2],
                       u_prime=sizes[best[2]][0], v_prime=sizes[best[2]][1], attempt_sizes=sizes,
                       trimmed_per_side=k, heavy_trim=k >= 0.25 * n, sample_probability=prob)

    bh = BiHole(tuple(int(x) for x in X), tuple(int(y) for y in Y))
    metrics["t"] = bh.size
    metrics["target_met"] = bh.size >= target
    report = TrialReport(
        algorithm="bihole",
        graph=describe(g),
        params={"epsilon": eps, "retries": params.retries, "seed": params.seed},
        outcome="target_met" if metrics["target_met"] else "target_missed",
        metrics=metrics,
        wall_time_ms=(time.perf_counter() - start) * 1000.0,
    )
    return bh, report
