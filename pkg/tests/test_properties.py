"""Property-based checks of the structural invariants."""

import numpy as np
from hypothesis import given, settings, strategies as st

from bihole_lab.bihole import BiholeParams, find_bihole, verify_bihole
from bihole_lab.coloring import ColoringParams, Phase, color_balanced, lemma_easy_color, verify_coloring
from bihole_lab.coupon import coupon_sim
from bihole_lab.graph import (BipartiteGraph, Side, VertexRef, complement_degree, max_degree, parse_edge_list,
                              serialize_edge_list, trim_high_degree)
from bihole_lab.matching import check_complement_matching, has_balanced_coloring, max_matching_complement
from bihole_lab.oracle import chi_b_exact, max_bihole_exact, max_matching_exact


@st.composite
def graphs(draw, max_side=8, balanced=False):
    nl = draw(st.integers(0, max_side))
    nr = nl if balanced else draw(st.integers(0, max_side))
    pairs = [(u, v) for u in range(nl) for v in range(nr)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return BipartiteGraph.from_edges(nl, nr, [e for e, k in zip(pairs, keep) if k])


@st.composite
def bounded_graphs(draw):
    """Balanced graphs with n >= 2 * max degree."""
    d = draw(st.integers(1, 3))
    n = draw(st.integers(2 * d, 2 * d + 4))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * d))
    deg_l, deg_r, kept = [0] * n, [0] * n, set()
    for u, v in edges:
        if (u, v) not in kept and deg_l[u] < d and deg_r[v] < d:
            kept.add((u, v))
            deg_l[u] += 1
            deg_r[v] += 1
    return BipartiteGraph.from_edges(n, n, kept)


@given(graphs())
def test_transpose_roundtrip(g):
    back = BipartiteGraph(g.right_count, g.left_count, g.right_ptr, g.right_adj)
    assert np.array_equal(back.right_ptr, g.left_ptr) and np.array_equal(back.right_adj, g.left_adj)


@given(graphs())
def test_serialize_roundtrip(g):
    text = serialize_edge_list(g)
    assert parse_edge_list(text) == g
    assert serialize_edge_list(parse_edge_list(text)) == text


@given(graphs())
def test_complement_degree_identity(g):
    for u in range(g.left_count):
        assert complement_degree(g, VertexRef(Side.LEFT, u)) + g.left_degrees()[u] == g.right_count
    for v in range(g.right_count):
        assert complement_degree(g, VertexRef(Side.RIGHT, v)) + g.right_degrees()[v] == g.left_count


@given(graphs(), st.data())
def test_trim_removes_top_k(g, data):
    k = data.draw(st.integers(0, min(g.left_count, g.right_count)))
    sub, rl, rr = trim_high_degree(g, k)
    assert len(rl) == len(rr) == k
    assert sub.left_count == g.left_count - k and sub.right_count == g.right_count - k
    for removed, deg in ((rl, g.left_degrees()), (rr, g.right_degrees())):
        if removed:
            floor = min(deg[list(removed)])
            assert all(deg[i] <= floor for i in range(len(deg)) if i not in removed)


@settings(max_examples=60, deadline=None)
@given(graphs(max_side=10, balanced=True), st.floats(0.05, 0.95), st.integers(0, 2 ** 32))
def test_find_bihole_sound_and_below_optimum(g, eps, seed):
    if g.left_count == 0:
        return
    bh, rep = find_bihole(g, BiholeParams(eps, seed=seed))
    assert verify_bihole(g, bh)
    assert bh.size <= max_bihole_exact(g).optimum
    assert rep.metrics["target_met"] == (bh.size >= rep.metrics["target"])


@settings(max_examples=60, deadline=None)
@given(graphs(max_side=6, balanced=True), st.integers(0, 1000))
def test_coloring_sound_and_agrees_on_feasibility(g, seed):
    if g.left_count == 0:
        return
    col, trace, rep = color_balanced(g, ColoringParams(0.5, seed=seed))
    feasible = has_balanced_coloring(g)
    assert (trace.phase_taken is Phase.INFEASIBLE) == (not feasible)
    if col is not None:
        assert verify_coloring(g, col)
    if g.left_count <= 5 and feasible:
        assert col.palette_size >= chi_b_exact(g).optimum


@settings(max_examples=80, deadline=None)
@given(graphs(max_side=7, balanced=True))
def test_matching_is_maximum(g):
    m = max_matching_complement(g)
    check_complement_matching(g, m)
    assert m.size == max_matching_exact(g)


@settings(max_examples=80, deadline=None)
@given(bounded_graphs())
def test_greedy_matching_coloring(g):
    c = lemma_easy_color(g)
    assert verify_coloring(g, c)
    assert c.palette_size <= 2 * max_degree(g) + 1


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 40), st.integers(1, 200), st.integers(0, 2 ** 40))
def test_coupon_stats_ranges(q, delta, trials, seed):
    s = coupon_sim(q, delta, trials, seed)
    assert 0.0 <= s.p_hat <= 1.0 and s.mean_T >= q and s.var_T >= 0.0
    if delta < q:
        assert s.p_hat == 0.0
