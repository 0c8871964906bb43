import pytest

from conftest import random_bounded, random_graph

from bihole_lab.bihole import verify_bihole
from bihole_lab.coloring import verify_coloring
from bihole_lab.generators import complete, cycle, empty, full_star, perfect_matching
from bihole_lab.graph import BipartiteGraph, GraphError, build, max_degree
from bihole_lab.oracle import OracleCapError, chi_b_exact, max_bihole_exact, max_matching_exact


def test_bihole_examples():
    assert max_bihole_exact(empty(3)).optimum == 3
    assert max_bihole_exact(complete(3)).optimum == 0
    r = max_bihole_exact(cycle(3))
    assert r.optimum == 1 and verify_bihole(cycle(3), r.witness)


def test_chib_examples():
    assert chi_b_exact(empty(2)).optimum == 1
    r = chi_b_exact(full_star(2))
    assert r.optimum is None and not r.feasible and r.witness is None
    r = chi_b_exact(perfect_matching(2))
    assert r.optimum == 2 and verify_coloring(perfect_matching(2), r.witness)
    assert chi_b_exact(empty(0)).optimum == 0


def test_matching_examples():
    assert max_matching_exact(complete(3)) == 0
    assert max_matching_exact(empty(3)) == 3
    assert max_matching_exact(full_star(4)) == 3
    assert max_matching_exact(perfect_matching(3), complement=False) == 3


def test_caps():
    with pytest.raises(OracleCapError):
        max_bihole_exact(empty(25))
    with pytest.raises(OracleCapError):
        chi_b_exact(empty(9))
    with pytest.raises(OracleCapError):
        max_matching_exact(empty(13))
    with pytest.raises(GraphError):
        max_bihole_exact(build(2, 3, []))


def _brute_bihole(g):
    n = g.left_count
    best = 0
    for xm in range(1 << n):
        nb = set()
        for u in range(n):
            if xm >> u & 1:
                nb.update(g.neighbors_left(u).tolist())
        best = max(best, min(bin(xm).count("1"), n - len(nb)))
    return best


def test_bihole_against_plain_enumeration(rng):
    for _ in range(100):
        n = rng.randint(1, 8)
        g = random_graph(rng, n, rng.choice([0.2, 0.4, 0.7]))
        r = max_bihole_exact(g)
        assert r.optimum == _brute_bihole(g)
        assert r.witness.size == r.optimum and verify_bihole(g, r.witness)


def test_bihole_monotone_under_edge_deletion(rng):
    for _ in range(100):
        n = rng.randint(2, 9)
        g = random_graph(rng, n, 0.5)
        e = g.edges().tolist()
        if not e:
            continue
        drop = rng.randrange(len(e))
        h = BipartiteGraph.from_edges(n, n, [tuple(x) for i, x in enumerate(e) if i != drop])
        assert max_bihole_exact(h).optimum >= max_bihole_exact(g).optimum


def test_chib_witness_verifies(rng):
    for _ in range(80):
        n = rng.randint(1, 6)
        g = random_graph(rng, n, rng.choice([0.2, 0.5]))
        r = chi_b_exact(g)
        if r.feasible:
            assert r.witness.palette_size == r.optimum and verify_coloring(g, r.witness)


def test_chib_within_2delta_plus_1(rng):
    for _ in range(60):
        dmax = rng.randint(1, 3)
        n = rng.randint(2 * dmax, min(8, 2 * dmax + 2))
        g = random_bounded(rng, n, dmax)
        assert chi_b_exact(g).optimum <= 2 * max_degree(g) + 1
