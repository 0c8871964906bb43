"""Immutable bipartite graphs stored as CSR in both orientations."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

INDEX_DTYPE = np.int64


class GraphError(ValueError):
    """Raised for malformed graphs or out-of-range vertex references."""


class ParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"


class VertexRef(NamedTuple):
    side: Side
    index: int


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=INDEX_DTYPE)
    a.setflags(write=False)
    return a


def _transpose(n_rows: int, n_cols: int, indptr: np.ndarray, indices: np.ndarray):
    rows = np.repeat(np.arange(n_rows, dtype=INDEX_DTYPE), np.diff(indptr))
    # stable sort keeps row order inside each column, so the result is sorted
    order = np.argsort(indices, kind="stable")
    t_indices = rows[order]
    counts = np.bincount(indices, minlength=n_cols) if len(indices) else np.zeros(n_cols, INDEX_DTYPE)
    t_indptr = np.zeros(n_cols + 1, dtype=INDEX_DTYPE)
    np.cumsum(counts, out=t_indptr[1:])
    return t_indptr, t_indices


class BipartiteGraph:
    """Simple bipartite graph ``(U, V, E)`` with ``U = range(left_count)``.

    ``left_ptr/left_adj`` is the CSR adjacency of the left side (sorted right
    indices per left vertex); ``right_ptr/right_adj`` is its exact transpose.
    Instances are immutable; the arrays are read-only.
    """

    __slots__ = ("left_count", "right_count", "left_ptr", "left_adj", "right_ptr", "right_adj",
                 "_left_lists", "_right_lists")

    def __init__(self, left_count: int, right_count: int, left_ptr, left_adj, *, _checked=False):
        left_ptr = np.asarray(left_ptr, dtype=INDEX_DTYPE)
        left_adj = np.asarray(left_adj, dtype=INDEX_DTYPE)
        if not _checked:
            _validate_csr(left_count, right_count, left_ptr, left_adj)
        self.left_count = int(left_count)
        self.right_count = int(right_count)
        self.left_ptr = _frozen(left_ptr)
        self.left_adj = _frozen(left_adj)
        r_ptr, r_adj = _transpose(self.left_count, self.right_count, self.left_ptr, self.left_adj)
        self.right_ptr = _frozen(r_ptr)
        self.right_adj = _frozen(r_adj)
        self._left_lists = None
        self._right_lists = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        """Build from (left, right) pairs; duplicates collapse, order is irrelevant."""
        if left_count < 0 or right_count < 0:
            raise GraphError("side counts must be nonnegative")
        pairs = list(edges)
        for u, v in pairs:
            if not (0 <= u < left_count and 0 <= v < right_count):
                raise GraphError(f"edge ({u}, {v}) out of range for a {left_count}x{right_count} graph")
        if not pairs:
            return cls(left_count, right_count, np.zeros(left_count + 1, INDEX_DTYPE), np.zeros(0, INDEX_DTYPE),
                       _checked=True)
        arr = np.unique(np.asarray(pairs, dtype=INDEX_DTYPE), axis=0)
        return cls._from_sorted_pairs(left_count, right_count, arr[:, 0], arr[:, 1])

    @classmethod
    def _from_sorted_pairs(cls, left_count, right_count, lefts, rights) -> "BipartiteGraph":
        counts = np.bincount(lefts, minlength=left_count) if len(lefts) else np.zeros(left_count, INDEX_DTYPE)
        ptr = np.zeros(left_count + 1, dtype=INDEX_DTYPE)
        np.cumsum(counts, out=ptr[1:])
        return cls(left_count, right_count, ptr, rights, _checked=True)

    @classmethod
    def from_csr(cls, left_count: int, right_count: int, left_ptr, left_adj) -> "BipartiteGraph":
        return cls(left_count, right_count, left_ptr, left_adj)

    # -- basic queries ------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return int(self.left_adj.shape[0])

    @property
    def is_balanced(self) -> bool:
        return self.left_count == self.right_count

    @property
    def n(self) -> int:
        """Side size of a balanced graph."""
        if not self.is_balanced:
            raise GraphError(f"graph is not balanced ({self.left_count}x{self.right_count})")
        return self.left_count

    def left_degrees(self) -> np.ndarray:
        return np.diff(self.left_ptr)

    def right_degrees(self) -> np.ndarray:
        return np.diff(self.right_ptr)

    def neighbors_left(self, u: int) -> np.ndarray:
        return self.left_adj[self.left_ptr[u]:self.left_ptr[u + 1]]

    def neighbors_right(self, v: int) -> np.ndarray:
        return self.right_adj[self.right_ptr[v]:self.right_ptr[v + 1]]

    def left_lists(self) -> list[list[int]]:
        """Adjacency as plain Python lists (cached); for pure-Python inner loops."""
        if self._left_lists is None:
            flat = self.left_adj.tolist()
            ptr = self.left_ptr.tolist()
            self._left_lists = [flat[ptr[i]:ptr[i + 1]] for i in range(self.left_count)]
        return self._left_lists

    def right_lists(self) -> list[list[int]]:
        if self._right_lists is None:
            flat = self.right_adj.tolist()
            ptr = self.right_ptr.tolist()
            self._right_lists = [flat[ptr[i]:ptr[i + 1]] for i in range(self.right_count)]
        return self._right_lists

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges sorted by (left, right)."""
        lefts = np.repeat(np.arange(self.left_count, dtype=INDEX_DTYPE), np.diff(self.left_ptr))
        return np.stack([lefts, np.asarray(self.left_adj)], axis=1)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors_left(u)
        i = int(np.searchsorted(nb, v))
        return i < len(nb) and int(nb[i]) == v

    def degree(self, ref: VertexRef) -> int:
        self._check_ref(ref)
        ptr = self.left_ptr if ref.side is Side.LEFT else self.right_ptr
        return int(ptr[ref.index + 1] - ptr[ref.index])

    def _check_ref(self, ref: VertexRef) -> None:
        count = self.left_count if ref.side is Side.LEFT else self.right_count
        if not 0 <= ref.index < count:
            raise GraphError(f"vertex {ref.side.value}{ref.index} out of range (side has {count})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.left_count == other.left_count and self.right_count == other.right_count
                and np.array_equal(self.left_ptr, other.left_ptr)
                and np.array_equal(self.left_adj, other.left_adj))

    def __hash__(self):
        return hash((self.left_count, self.right_count, self.left_adj.tobytes(), self.left_ptr.tobytes()))

    def __repr__(self) -> str:
        return f"BipartiteGraph({self.left_count}x{self.right_count}, m={self.edge_count})"


def _validate_csr(left_count, right_count, ptr, adj) -> None:
    if left_count < 0 or right_count < 0:
        raise GraphError("side counts must be nonnegative")
    if ptr.shape != (left_count + 1,) or ptr[0] != 0 or ptr[-1] != adj.shape[0]:
        raise GraphError("malformed CSR offsets")
    if np.any(np.diff(ptr) < 0):
        raise GraphError("CSR offsets must be nondecreasing")
    if adj.size:
        if adj.min() < 0 or adj.max() >= right_count:
            bad = int(np.flatnonzero((adj < 0) | (adj >= right_count))[0])
            u = int(np.searchsorted(ptr, bad, side="right") - 1)
            raise GraphError(f"edge ({u}, {int(adj[bad])}) out of range for a {left_count}x{right_count} graph")
        # strictly increasing inside each row
        step = np.diff(adj)
        row_start = np.zeros(adj.shape[0], dtype=bool)
        row_start[ptr[:-1][ptr[:-1] < adj.shape[0]]] = True
        if np.any((step <= 0) & ~row_start[1:]):
            raise GraphError("adjacency lists must be strictly increasing")


def build(left_count: int, right_count: int, edges: Iterable[tuple[int, int]]) -> BipartiteGraph:
    return BipartiteGraph.from_edges(left_count, right_count, edges)


def average_degree(g: BipartiteGraph) -> Fraction:
    """Exact ``|E| / left_count``."""
    if g.left_count == 0:
        raise GraphError("average degree of a graph with an empty left side is undefined")
    return Fraction(g.edge_count, g.left_count)


def max_degree(g: BipartiteGraph) -> int:
    dl = int(g.left_degrees().max()) if g.left_count else 0
    dr = int(g.right_degrees().max()) if g.right_count else 0
    return max(dl, dr)


def complement_degree(g: BipartiteGraph, ref: VertexRef) -> int:
    opposite = g.right_count if ref.side is Side.LEFT else g.left_count
    return opposite - g.degree(ref)


class Induced(NamedTuple):
    graph: BipartiteGraph
    left_map: np.ndarray   # new left index -> original left index
    right_map: np.ndarray  # new right index -> original right index


def induced(g: BipartiteGraph, keep_left: Iterable[int], keep_right: Iterable[int]) -> Induced:
    """Subgraph on the kept vertices; new indices follow original order."""
    keep_l = np.zeros(g.left_count, dtype=bool)
    keep_r = np.zeros(g.right_count, dtype=bool)
    kl = np.fromiter(keep_left, dtype=INDEX_DTYPE)
    kr = np.fromiter(keep_right, dtype=INDEX_DTYPE)
    for arr, count, side in ((kl, g.left_count, "left"), (kr, g.right_count, "right")):
        if arr.size and (arr.min() < 0 or arr.max() >= count):
            raise GraphError(f"{side} index out of range in induced()")
    keep_l[kl] = True
    keep_r[kr] = True
    new_l = np.cumsum(keep_l) - 1
    new_r = np.cumsum(keep_r) - 1
    e = g.edges()
    mask = keep_l[e[:, 0]] & keep_r[e[:, 1]]
    lefts = new_l[e[mask, 0]]
    rights = new_r[e[mask, 1]]
    sub = BipartiteGraph._from_sorted_pairs(int(keep_l.sum()), int(keep_r.sum()), lefts, rights)
    return Induced(sub, _frozen(np.flatnonzero(keep_l)), _frozen(np.flatnonzero(keep_r)))


def _top_by_degree(degrees: np.ndarray, k: int) -> np.ndarray:
    # highest degree first, lower index first among ties
    order = np.lexsort((np.arange(len(degrees)), -degrees))
    return np.sort(order[:k])


def trim_high_degree(g: BipartiteGraph, count_per_side: int):
    """Drop the ``count_per_side`` highest-degree vertices from each side.

    Returns ``(induced graph, removed_left, removed_right)``; the survivors
    keep their relative order, so survivor ``i`` of a side is the ``i``-th
    smallest original index not removed.
    """
    k = int(count_per_side)
    if k < 0 or k > g.left_count or k > g.right_count:
        raise GraphError(f"cannot remove {k} vertices per side from a {g.left_count}x{g.right_count} graph")
    if k == 0:
        return g, set(), set()
    rem_l = _top_by_degree(g.left_degrees(), k)
    rem_r = _top_by_degree(g.right_degrees(), k)
    keep_l = np.setdiff1d(np.arange(g.left_count), rem_l)
    keep_r = np.setdiff1d(np.arange(g.right_count), rem_r)
    sub = induced(g, keep_l, keep_r).graph
    return sub, set(rem_l.tolist()), set(rem_r.tolist())


def describe(g: BipartiteGraph) -> dict:
    """Small JSON-friendly descriptor used in reports."""
    avg = float(average_degree(g)) if g.left_count else 0.0
    return {"left_count": g.left_count, "right_count": g.right_count, "edge_count": g.edge_count,
            "avg_degree": avg, "max_degree": max_degree(g)}


# -- edge-list text format ---------------------------------------------------

def serialize_edge_list(g: BipartiteGraph) -> str:
    lines = [f"{g.left_count} {g.right_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges().tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> BipartiteGraph:
    """Parse ``"nL nR m"`` followed by ``m`` lines ``"u v"``; ``#`` starts a comment line."""
    header = None
    edges: list[tuple[int, int]] = []
    lineno = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise ParseError(lineno, f"non-integer field in {raw!r}") from None
        if header is None:
            if len(values) != 3 or min(values) < 0:
                raise ParseError(lineno, "header must be three nonnegative integers 'nL nR m'")
            header = values
            continue
        if len(values) != 2:
            raise ParseError(lineno, f"edge line must have two fields, got {len(values)}")
        u, v = values
        if not (0 <= u < header[0] and 0 <= v < header[1]):
            raise ParseError(lineno, f"edge ({u}, {v}) out of range for a {header[0]}x{header[1]} graph")
        if len(edges) == header[2]:
            raise ParseError(lineno, f"more edge lines than the declared {header[2]}")
        edges.append((u, v))
    if header is None:
        raise ParseError(max(lineno, 1), "missing header line")
    if len(edges) != header[2]:
        raise ParseError(lineno, f"declared {header[2]} edges but found {len(edges)}")
    return build(header[0], header[1], edges)


def read_edge_list(path) -> BipartiteGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: BipartiteGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_edge_list(g))

