"""Empirical frequency checks at desk scale (n = 20000)."""

import math

import numpy as np
import pytest

from bihole_lab.bihole import BiholeParams, find_bihole, log_ratio
from bihole_lab.coloring import phase1_color_U
from bihole_lab.generators import empty, gnnp

N, DELTA, EPS = 20000, 64, 0.5


@pytest.fixture(scope="module")
def first_attempts():
    """``(|U'|, |V'|)`` of the first sampling attempt for 50 seeds."""
    out = []
    for seed in range(50):
        g = gnnp(N, DELTA / N, 100 + seed)
        _, rep = find_bihole(g, BiholeParams(EPS, retries=0, seed=seed))
        out.append(tuple(rep.metrics["attempt_sizes"][0]))
    return out


@pytest.mark.slow
def test_sampled_left_set_large(first_attempts):
    bound = (1 - EPS) * log_ratio(DELTA) * N
    assert sum(u >= bound for u, _ in first_attempts) >= 49


@pytest.mark.slow
def test_uncovered_right_set_large(first_attempts):
    bound = (1 - EPS) * log_ratio(DELTA) * N
    assert sum(v >= bound for _, v in first_attempts) >= 45


def test_left_classes_binomially_tight():
    n, q = 20000, 20
    half_width = 5 * math.sqrt(n / q * (1 - 1 / q))
    g = empty(n)
    hits = 0
    for seed in range(50):
        sizes = np.bincount(phase1_color_U(g, q, seed), minlength=q)
        hits += bool(np.all(np.abs(sizes - n / q) <= half_width))
    assert hits >= 45
