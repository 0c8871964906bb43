"""Exhaustive ground truth for small graphs.

All searches work on Python int bitmasks.  Size caps are enforced with
:class:`OracleCapError` rather than letting exponential searches run.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional, Union

from .bihole import BiHole
from .coloring import BalancedColoring
from .graph import BipartiteGraph, GraphError

BIHOLE_CAP = 24
CHIB_CAP = 8
MATCHING_CAP = 12


class OracleCapError(GraphError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: Optional[int]                 # None means infeasible
    witness: Union[BiHole, BalancedColoring, None]
    explored: int

    @property
    def feasible(self) -> bool:
        return self.optimum is not None


def _masks(g: BipartiteGraph) -> list[int]:
    return [sum(1 << v for v in nb) for nb in g.left_lists()]


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _balanced_n(g: BipartiteGraph, cap: int, what: str) -> int:
    if not g.is_balanced:
        raise GraphError(f"graph is not balanced ({g.left_count}x{g.right_count})")
    if g.left_count > cap:
        raise OracleCapError(f"{what} oracle is capped at n={cap}, got n={g.left_count}")
    return g.left_count


def max_bihole_exact(g: BipartiteGraph) -> OracleResult:
    """Largest bi-hole by branch and bound over left subsets.

    For a fixed left set ``X`` the best partner is every right vertex
    outside ``N(X)``, so the value of ``X`` is ``min(|X|, n - |N(X)|)`` and
    only subsets of ``U`` need enumerating.
    """
    n = _balanced_n(g, BIHOLE_CAP, "bi-hole")
    nbm = _masks(g)
    best = [0, 0]
    explored = 0

    def dfs(i, xmask, xsize, nmask):
        nonlocal explored
        explored += 1
        free = n - bin(nmask).count("1")
        if min(xsize, free) > best[0]:
            best[0], best[1] = min(xsize, free), xmask
        if i == n or min(xsize + n - i, free) <= best[0]:
            return
        dfs(i + 1, xmask | (1 << i), xsize + 1, nmask | nbm[i])
        dfs(i + 1, xmask, xsize, nmask)

    dfs(0, 0, 0, 0)
    t, xmask = best
    covered = 0
    for u in _bits(xmask):
        covered |= nbm[u]
    X = _bits(xmask)[:t]
    Y = [v for v in range(n) if not covered >> v & 1][:t]
    return OracleResult(t, BiHole(tuple(X), tuple(Y)), explored)


def chi_b_exact(g: BipartiteGraph) -> OracleResult:
    """Minimum number of colors in a balanced coloring, or infeasible.

    Memoised search over (remaining left, remaining right) masks; the class
    holding the lowest remaining left vertex is chosen at each step, which
    fixes a canonical color order.
    """
    n = _balanced_n(g, CHIB_CAP, "balanced coloring")
    nbm = _masks(g)
    INF = n + 1

    @lru_cache(maxsize=None)
    def solve(L: int, R: int):
        if L == 0:
            return 0, None
        low = L & -L
        rest = _bits(L & ~low)
        best = (INF, None)
        # larger classes first: finds short colorings early
        for k in range(len(rest), -1, -1):
            for extra in combinations(rest, k):
                X = low
                for u in extra:
                    X |= 1 << u
                blocked = 0
                for u in _bits(X):
                    blocked |= nbm[u]
                allowed = _bits(R & ~blocked)
                if len(allowed) < k + 1:
                    continue
                for ys in combinations(allowed, k + 1):
                    Y = 0
                    for v in ys:
                        Y |= 1 << v
                    sub, _ = solve(L & ~X, R & ~Y)
                    if sub + 1 < best[0]:
                        best = (sub + 1, (X, Y))
                        if best[0] == 1:
                            return best
        return best

    full = (1 << n) - 1
    count, _ = solve(full, full)
    explored = solve.cache_info().currsize
    if n == 0:
        return OracleResult(0, BalancedColoring((), (), 0), explored)
    if count >= INF:
        return OracleResult(None, None, explored)
    left = [0] * n
    right = [0] * n
    L = R = full
    color = 0
    while L:
        _, (X, Y) = solve(L, R)
        for u in _bits(X):
            left[u] = color
        for v in _bits(Y):
            right[v] = color
        L &= ~X
        R &= ~Y
        color += 1
    return OracleResult(count, BalancedColoring(tuple(left), tuple(right), count), explored)


def max_matching_exact(g: BipartiteGraph, complement: bool = True) -> int:
    """Maximum matching size by exhaustive DP over used right vertices."""
    if g.left_count > MATCHING_CAP or g.right_count > MATCHING_CAP:
        raise OracleCapError(f"matching oracle is capped at {MATCHING_CAP} per side")
    nbm = _masks(g)
    full = (1 << g.right_count) - 1
    allowed = [(full & ~m) if complement else m for m in nbm]

    @lru_cache(maxsize=None)
    def f(i: int, used: int) -> int:
        if i == g.left_count:
            return 0
        best = f(i + 1, used)
        for v in _bits(allowed[i] & ~used):
            best = max(best, 1 + f(i + 1, used | (1 << v)))
        return best

    return f(0, 0)
