"""Matchings in the bipartite complement; balanced colorability test."""

from dataclasses import dataclass

from . import kernels
from .graph import BipartiteGraph, GraphError


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]   # (left, right), sorted by left
    perfect: bool

    @property
    def size(self) -> int:
        return len(self.pairs)

    def right_of(self) -> dict[int, int]:
        return dict(self.pairs)


def _require_balanced(g: BipartiteGraph) -> int:
    if not g.is_balanced:
        raise GraphError(f"graph is not balanced ({g.left_count}x{g.right_count})")
    return g.left_count


def max_matching_complement(g: BipartiteGraph) -> Matching:
    """Maximum matching of the complement, never materialising it.

    Complement neighbours are enumerated by skipping over ``g``'s sorted
    adjacency lists (see ``kernels.complement_matching``).
    """
    n = _require_balanced(g)
    match_l = kernels.complement_matching(n, g.left_ptr, g.left_adj).tolist()
    pairs = tuple((u, r) for u, r in enumerate(match_l) if r >= 0)
    return Matching(pairs, len(pairs) == n)


def has_balanced_coloring(g: BipartiteGraph) -> bool:
    """A balanced coloring exists iff the complement has a perfect matching."""
    return max_matching_complement(g).perfect


def check_complement_matching(g: BipartiteGraph, m: Matching) -> None:
    """Raise ``AssertionError`` unless ``m`` is a matching of the complement of ``g``."""
    lefts = [u for u, _ in m.pairs]
    rights = [v for _, v in m.pairs]
    assert len(set(lefts)) == len(lefts), "left vertex matched twice"
    assert len(set(rights)) == len(rights), "right vertex matched twice"
    for u, v in m.pairs:
        assert 0 <= u < g.left_count and 0 <= v < g.right_count, f"pair ({u}, {v}) out of range"
        assert not g.has_edge(u, v), f"pair ({u}, {v}) is an edge of the graph"
    assert m.perfect == (len(m.pairs) == g.left_count == g.right_count)
