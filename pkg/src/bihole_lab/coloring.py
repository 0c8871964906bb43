"""Balanced coloring of bounded-degree bipartite graphs.

Pipeline for a balanced ``n x n`` graph with maximum degree ``D``:

1. colour ``U`` uniformly from ``q = ceil((1 + eps/2) D / ln D)`` colours;
2. give each ``v in V`` a uniform colour not used on ``N(v)``, or leave it
   uncoloured (the set ``S``) when every colour appears there;
3. equalize: uncolour the lowest-index surplus of each ``V_c`` (set ``S0``);
   the deficits ``a_c = |U_c| - |V'_c|`` then sum to ``|S'|``, ``S' = S + S0``;
4. small ``S``: give ``S'`` the extra colour ``c* = q`` and move ``a_c``
   vertices of each ``U_c`` with no neighbour in ``S'`` to ``c*``;
5. large ``S``: pick ``a_c`` low-``S'``-degree vertices from each ``U_c``
   with Moser-Tardos resampling so that the residual graph on
   ``(S_U, S')`` has maximum degree ``d* = ceil(D / ln^1.5 D)``, then colour
   it greedily along a complement perfect matching with colours ``q+1, ...``.

Any phase failure retries with a fresh seed, then falls back to the greedy
matching coloring of the whole graph (at most ``2D + 1`` colours).
"""

from __future__ import annotations

import enum
import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import BipartiteGraph, GraphError, describe, induced, max_degree
from .matching import Matching, max_matching_complement
from .report import TrialReport
from .rng import TAG_PHASE1, TAG_PHASE2, TAG_RESAMPLE, TAG_RETRY, Xoshiro256, bernoulli_threshold, derive_seed


class InfeasibleError(GraphError):
    """The graph has no balanced coloring (its complement has no perfect matching)."""


class PhaseFailure(Exception):
    """A randomized phase did not reach its guarantee; the caller retries or falls back."""


class Phase(str, enum.Enum):
    SMALL_S = "SmallS"
    LARGE_S = "LargeS"
    FALLBACK_GLOBAL = "FallbackGlobal"
    FALLBACK_EXACT = "FallbackExact"
    INFEASIBLE = "Infeasible"
    FAILURE = "Failure"


@dataclass(frozen=True)
class BalancedColoring:
    left_colors: tuple[int, ...]
    right_colors: tuple[int, ...]
    palette_size: int

    @classmethod
    def from_arrays(cls, left, right) -> "BalancedColoring":
        left = tuple(int(c) for c in left)
        right = tuple(int(c) for c in right)
        return cls(left, right, len(set(left) | set(right)))


@dataclass(frozen=True)
class ColoringParams:
    epsilon: float
    seed: int = 0
    resample_cap: Optional[int] = None   # default 1000 * (n + q)
    retries: int = 2

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.retries < 0:
            raise ValueError("retries must be nonnegative")
        if self.resample_cap is not None and self.resample_cap < 1:
            raise ValueError("resample_cap must be positive")


@dataclass
class ColoringTrace:
    q: int = 0
    available_lists: list = field(default_factory=list)
    uncolored_S: list = field(default_factory=list)
    equalize_removed: list = field(default_factory=list)
    deficits: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    selected_SU: list = field(default_factory=list)
    sampled_SU: list = field(default_factory=list)
    star_color: Optional[int] = None
    phase_taken: Phase = Phase.FAILURE
    left_class_sizes: list = field(default_factory=list)
    resample_count: int = 0
    residual_max_degree: Optional[int] = None
    attempts: int = 0
    failures: list = field(default_factory=list)

    def summary(self) -> dict:
        """Per-phase counts (what the CLI dumps with ``--trace-out``)."""
        sizes = self.left_class_sizes
        return {
            "phase_taken": self.phase_taken.value,
            "q": self.q,
            "attempts": self.attempts,
            "failures": list(self.failures),
            "u_class_min": min(sizes) if sizes else None,
            "u_class_max": max(sizes) if sizes else None,
            "S_size": len(self.uncolored_S),
            "S0_size": len(self.equalize_removed),
            "deficits": list(self.deficits),
            "candidate_sizes": [len(c) for c in self.candidates],
            "sampled_SU_size": len(self.sampled_SU),
            "selected_SU_size": len(self.selected_SU),
            "star_color": self.star_color,
            "resample_count": self.resample_count,
            "residual_max_degree": self.residual_max_degree,
        }


# -- thresholds (natural log, explicit rounding) -------------------------------

def palette_q(delta: int, epsilon: float) -> int:
    return math.ceil(round((1.0 + epsilon / 2.0) * delta / math.log(delta), 9))


def residual_degree_cap(delta: int) -> int:
    return math.ceil(round(delta / math.log(delta) ** 1.5, 9))


def small_s_threshold(n: int, delta: int) -> int:
    return n // (delta * delta)


def resample_probability(delta: int) -> float:
    return min(1.0, 1.0 / math.log(delta) ** 1.75)


def candidate_floor(n: int, delta: int) -> float:
    """``|S'_U & U*_c|`` at or below this is a bad event."""
    return n / (delta * math.log(delta) ** 0.875)


# -- verification -------------------------------------------------------------

def verify_coloring(g: BipartiteGraph, coloring: BalancedColoring) -> bool:
    L = np.asarray(coloring.left_colors, dtype=np.int64)
    R = np.asarray(coloring.right_colors, dtype=np.int64)
    if L.shape != (g.left_count,) or R.shape != (g.right_count,):
        return False
    if (L.size and L.min() < 0) or (R.size and R.min() < 0):
        return False
    top = int(max(L.max(initial=-1), R.max(initial=-1))) + 1
    if not np.array_equal(np.bincount(L, minlength=top), np.bincount(R, minlength=top)):
        return False
    e = g.edges()
    return not np.any(L[e[:, 0]] == R[e[:, 1]])


# -- phases ---------------------------------------------------------------------

def phase1_color_U(g: BipartiteGraph, q: int, seed: int) -> np.ndarray:
    if q < 1:
        raise ValueError("q must be positive")
    rng = Xoshiro256(derive_seed(seed, TAG_PHASE1))
    return np.fromiter((rng.below(q) for _ in range(g.left_count)), np.int64, g.left_count)


def phase2_color_V(g: BipartiteGraph, left_colors: np.ndarray, q: int, seed: int):
    """Returns ``(right_colors, available_lists)``; uncoloured vertices get -1.

    The colour of ``v`` is the ``j``-th smallest of its list with
    ``j = below(|Q_v|)``; vertices with an empty list consume no draw.
    """
    used = np.zeros((g.right_count, q), dtype=bool)
    e = g.edges()
    used[e[:, 1], np.asarray(left_colors)[e[:, 0]]] = True
    rng = Xoshiro256(derive_seed(seed, TAG_PHASE2))
    right = np.full(g.right_count, -1, np.int64)
    lists = []
    for v in range(g.right_count):
        avail = np.flatnonzero(~used[v]).tolist()
        lists.append(avail)
        if avail:
            right[v] = avail[rng.below(len(avail))]
    return right, lists


def equalize(g: BipartiteGraph, left_colors: np.ndarray, right_colors: np.ndarray, q: int):
    """Uncolour surplus right vertices; returns ``(right_colors, S0, deficits)``."""
    right = np.array(right_colors, dtype=np.int64)
    u_sizes = np.bincount(np.asarray(left_colors), minlength=q)
    removed = []
    for c in range(q):
        members = np.flatnonzero(right == c)
        surplus = members.size - int(u_sizes[c])
        if surplus > 0:
            drop = members[:surplus]
            right[drop] = -1
            removed.extend(drop.tolist())
    v_sizes = np.bincount(right[right >= 0], minlength=q)
    deficits = (u_sizes - v_sizes[:q]).tolist()
    return right, sorted(removed), deficits


def small_s_patch(g: BipartiteGraph, left_colors: np.ndarray, right_colors: np.ndarray,
                  deficits: list, star_color: int):
    """Colour ``S'`` (all -1 entries) with ``star_color`` and rebalance from ``U``.

    Raises :class:`PhaseFailure` when some ``U_c`` has fewer than ``a_c``
    vertices avoiding ``S'``.
    """
    left = np.array(left_colors, dtype=np.int64)
    right = np.array(right_colors, dtype=np.int64)
    s_prime = right < 0
    e = g.edges()
    touches = np.zeros(g.left_count, dtype=bool)
    touches[e[s_prime[e[:, 1]], 0]] = True
    for c, a in enumerate(deficits):
        if a == 0:
            continue
        eligible = np.flatnonzero((left == c) & ~touches)
        if eligible.size < a:
            raise PhaseFailure(f"color {c}: {eligible.size} vertices avoid S' but deficit is {a}")
        left[eligible[:a]] = star_color
    right[s_prime] = star_color
    return left, right


@dataclass
class Selection:
    selected: list
    sampled: list
    candidates: list
    resamples: int


def select_SU(g: BipartiteGraph, left_colors: np.ndarray, right_colors: np.ndarray, deficits: list,
              q: int, seed: int, resample_cap: int, delta: Optional[int] = None) -> Selection:
    """Choose ``a_c`` vertices from each ``U*_c`` keeping the residual degree at most ``d*``.

    ``U*_c`` = vertices of colour ``c`` with at most ``d*`` neighbours in
    ``S'``.  Each left vertex joins the sample with probability
    ``1 / ln^1.75 D``.  Bad events, numbered ``B_v`` (``v in S'``, by index)
    then ``A_c`` (by colour): ``v`` has more than ``d*`` sampled neighbours;
    at most ``n / (D ln^0.875 D)`` sampled vertices in ``U*_c``.  The
    lowest-numbered violated event has its variables redrawn until none is
    violated.
    """
    n = g.left_count
    D = max_degree(g) if delta is None else delta
    dstar = residual_degree_cap(D)
    left = np.asarray(left_colors)
    in_s = np.asarray(right_colors) < 0
    s_prime = np.flatnonzero(in_s).tolist()
    e = g.edges()
    deg_in_s = np.bincount(e[in_s[e[:, 1]], 0], minlength=n)
    cand_mask = deg_in_s <= dstar
    candidates = [np.flatnonzero((left == c) & cand_mask).tolist() for c in range(q)]
    floor_a = candidate_floor(n, D)
    if not s_prime:
        return Selection([], [], candidates, 0)

    for c, pool in enumerate(candidates):
        if len(pool) <= floor_a or len(pool) < deficits[c]:
            raise PhaseFailure(f"color {c}: only {len(pool)} candidates "
                               f"(need > {floor_a:.1f} and >= {deficits[c]})")

    thr = bernoulli_threshold(resample_probability(D))
    rng = Xoshiro256(derive_seed(seed, TAG_RESAMPLE))
    member = [rng.bernoulli(thr) for _ in range(n)]

    nb_right = g.right_lists()
    # B-events each left vertex feeds into
    feeds = [[] for _ in range(n)]
    for i, v in enumerate(s_prime):
        for u in nb_right[v]:
            feeds[u].append(i)
    a_base = len(s_prime)
    cand_color = [-1] * n
    for c, pool in enumerate(candidates):
        for u in pool:
            cand_color[u] = c
    nb_count = [sum(member[u] for u in nb_right[v]) for v in s_prime]
    cand_count = [sum(member[u] for u in pool) for pool in candidates]

    def violated(ev: int) -> bool:
        if ev < a_base:
            return nb_count[ev] > dstar
        return cand_count[ev - a_base] <= floor_a

    heap = [ev for ev in range(a_base + q) if violated(ev)]
    heapq.heapify(heap)
    resamples = 0
    while heap:
        ev = heapq.heappop(heap)
        if not violated(ev):
            continue
        if resamples >= resample_cap:
            raise PhaseFailure(f"resample cap {resample_cap} reached")
        resamples += 1
        variables = nb_right[s_prime[ev]] if ev < a_base else candidates[ev - a_base]
        for u in variables:
            new = rng.bernoulli(thr)
            if new == member[u]:
                continue
            member[u] = new
            step = 1 if new else -1
            for i in feeds[u]:
                nb_count[i] += step
                if step > 0 and nb_count[i] == dstar + 1:
                    heapq.heappush(heap, i)
            c = cand_color[u]
            if c >= 0:
                cand_count[c] += step
                if violated(a_base + c):
                    heapq.heappush(heap, a_base + c)
        if violated(ev):
            heapq.heappush(heap, ev)

    selected = []
    for c, pool in enumerate(candidates):
        chosen = [u for u in pool if member[u]]
        if len(chosen) < deficits[c]:
            raise PhaseFailure(f"color {c}: {len(chosen)} sampled candidates, deficit {deficits[c]}")
        selected.extend(chosen[:deficits[c]])
    # sum of deficits equals |S'|, so no padding is ever needed
    assert len(selected) == len(s_prime)
    sampled = [u for u in range(n) if member[u]]
    return Selection(sorted(selected), sampled, candidates, resamples)


def color_along_matching(g: BipartiteGraph, matching: Matching, palette_offset: int = 0) -> BalancedColoring:
    """Greedy colouring of matched pairs in order; each pair gets one colour.

    The pair ``(u, v)`` takes the smallest colour ``>= palette_offset`` not
    already on a neighbour of ``u`` or of ``v``; at most ``2D + 1`` colours.
    """
    if not matching.perfect:
        raise InfeasibleError("complement has no perfect matching")
    nl, nr = g.left_lists(), g.right_lists()
    left = [-1] * g.left_count
    right = [-1] * g.right_count
    for u, v in matching.pairs:
        forbidden = {right[w] for w in nl[u]}
        forbidden.update(left[w] for w in nr[v])
        c = palette_offset
        while c in forbidden:
            c += 1
        left[u] = c
        right[v] = c
    return BalancedColoring.from_arrays(left, right)


def lemma_easy_color(g: BipartiteGraph, palette_offset: int = 0) -> BalancedColoring:
    """Balanced colouring with at most ``2D + 1`` colours; needs ``n >= 2D``."""
    if not g.is_balanced:
        raise GraphError(f"graph is not balanced ({g.left_count}x{g.right_count})")
    D = max_degree(g)
    if g.left_count < 2 * D:
        raise GraphError(f"need n >= 2*max_degree, got n={g.left_count}, max_degree={D}")
    return color_along_matching(g, max_matching_complement(g), palette_offset)


# -- orchestration -------------------------------------------------------------

def _attempt(g: BipartiteGraph, n: int, D: int, q: int, seed: int, cap: int, trace: ColoringTrace):
    left = phase1_color_U(g, q, seed)
    trace.left_class_sizes = np.bincount(left, minlength=q).tolist()
    right, lists = phase2_color_V(g, left, q, seed)
    trace.available_lists = lists
    trace.uncolored_S = np.flatnonzero(right < 0).tolist()
    right, s0, deficits = equalize(g, left, right, q)
    trace.equalize_removed = s0
    trace.deficits = deficits

    if len(trace.uncolored_S) <= small_s_threshold(n, D):
        trace.star_color = q
        left, right = small_s_patch(g, left, right, deficits, q)
        return left, right, Phase.SMALL_S

    sel = select_SU(g, left, right, deficits, q, seed, cap, delta=D)
    trace.candidates = sel.candidates
    trace.sampled_SU = sel.sampled
    trace.selected_SU = sel.selected
    trace.resample_count = sel.resamples
    s_prime = np.flatnonzero(right < 0)
    sub, lmap, rmap = induced(g, sel.selected, s_prime.tolist())
    trace.residual_max_degree = max_degree(sub)
    if trace.residual_max_degree > residual_degree_cap(D):
        raise AssertionError(f"residual degree {trace.residual_max_degree} exceeds d*={residual_degree_cap(D)}")
    match = max_matching_complement(sub)
    if not match.perfect:
        raise PhaseFailure("residual graph has no complement perfect matching")
    residual = color_along_matching(sub, match, palette_offset=q + 1)
    left = left.copy()
    left[lmap] = residual.left_colors
    right[rmap] = residual.right_colors
    return left, right, Phase.LARGE_S


def _fallback(g: BipartiteGraph, n: int, D: int, match: Matching):
    if n >= 2 * D:
        return lemma_easy_color(g), Phase.FALLBACK_GLOBAL
    if n <= 8:
        from .oracle import chi_b_exact
        return chi_b_exact(g).witness, Phase.FALLBACK_EXACT
    # the greedy matching step only needs the perfect matching, which exists here
    return color_along_matching(g, match), Phase.FALLBACK_GLOBAL


def color_balanced(g: BipartiteGraph, params: ColoringParams):
    """Returns ``(coloring or None, trace, report)``.

    ``coloring`` is None exactly when the report outcome is ``infeasible``
    or ``failure``; any returned coloring passes :func:`verify_coloring`.
    """
    if not g.is_balanced:
        raise GraphError(f"graph is not balanced ({g.left_count}x{g.right_count})")
    if g.left_count == 0:
        raise GraphError("graph has no vertices")
    start = time.perf_counter()
    n = g.left_count
    D = max_degree(g)
    trace = ColoringTrace()
    coloring = None
    q = None

    match = max_matching_complement(g)
    if not match.perfect:
        trace.phase_taken = Phase.INFEASIBLE
    else:
        q = palette_q(D, params.epsilon) if D >= 3 else None
        if q is None or q >= 2 * D + 1:
            coloring, trace.phase_taken = _fallback(g, n, D, match)
        else:
            trace.q = q
            cap = params.resample_cap or 1000 * (n + q)
            for attempt in range(params.retries + 1):
                trace.attempts = attempt + 1
                seed = derive_seed(params.seed, TAG_RETRY, attempt)
                try:
                    left, right, phase = _attempt(g, n, D, q, seed, cap, trace)
                except PhaseFailure as exc:
                    trace.failures.append(str(exc))
                    continue
                coloring = BalancedColoring.from_arrays(left, right)
                trace.phase_taken = phase
                break
            else:
                coloring, trace.phase_taken = _fallback(g, n, D, match)

    if coloring is not None and not verify_coloring(g, coloring):
        raise AssertionError(f"{trace.phase_taken.value} produced an invalid coloring")

    metrics = {"phase_taken": trace.phase_taken.value, "max_degree": D, "matching_size": match.size}
    if coloring is not None:
        metrics["palette_size"] = coloring.palette_size
        metrics["palette_bound"] = _palette_bound(trace, D)
    if q is not None and trace.attempts:
        dstar = residual_degree_cap(D)
        metrics.update(q=q, dstar=dstar, S_size=len(trace.uncolored_S), S0_size=len(trace.equalize_removed),
                       resample_count=trace.resample_count, residual_max_degree=trace.residual_max_degree,
                       attempts=trace.attempts, failures=len(trace.failures))
    if trace.phase_taken is Phase.INFEASIBLE:
        outcome = "infeasible"
    elif coloring is None:
        outcome = "failure"
    else:
        outcome = "colored"
    report = TrialReport(
        algorithm="color",
        graph=describe(g),
        params={"epsilon": params.epsilon, "seed": params.seed, "retries": params.retries,
                "resample_cap": params.resample_cap},
        outcome=outcome,
        metrics=metrics,
        wall_time_ms=(time.perf_counter() - start) * 1000.0,
    )
    return coloring, trace, report


def _palette_bound(trace: ColoringTrace, D: int) -> Optional[int]:
    if trace.phase_taken is Phase.SMALL_S:
        return trace.q + 1
    if trace.phase_taken is Phase.LARGE_S:
        return trace.q + 1 + 2 * residual_degree_cap(D) + 1
    if trace.phase_taken is Phase.FALLBACK_GLOBAL:
        return 2 * D + 1
    return None
