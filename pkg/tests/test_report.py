import json

import jsonschema
import pytest

from bihole_lab.bihole import BiholeParams, find_bihole
from bihole_lab.coloring import ColoringParams, color_balanced
from bihole_lab.generators import full_star, gnnp
from bihole_lab.report import BENCH_SCHEMA, TRIAL_SCHEMA, BenchSummary, TrialReport


def test_trial_reports_validate():
    g = gnnp(100, 0.05, 1)
    _, rep = find_bihole(g, BiholeParams(0.5))
    jsonschema.validate(json.loads(rep.to_json()), TRIAL_SCHEMA)
    for h in (g, full_star(4)):
        _, _, rep = color_balanced(h, ColoringParams(0.5))
        jsonschema.validate(json.loads(rep.to_json(timing=False)), TRIAL_SCHEMA)
        assert rep.wall_time_ms >= 0


def test_timing_switch():
    r = TrialReport("x", None, {}, "ok", {}, 12.5)
    assert r.to_dict()["wall_time_ms"] == 12.5
    assert r.to_dict(timing=False)["wall_time_ms"] is None
    assert r.wall_time_ms == 12.5


def test_bad_outcome_rejected():
    bad = TrialReport("x", None, {}, "great", {}, 1.0).to_dict()
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, TRIAL_SCHEMA)


def test_bench_summary_recomputable():
    rows = [{"outcome": "ok", "metrics": {"t": v}} for v in (5, 1, 3, 9)]
    s = BenchSummary.from_trials("bihole", rows, "t", lambda r: r["metrics"]["t"] >= 3)
    agg = s.aggregate
    assert (agg["count"], agg["successes"], agg["min"], agg["median"], agg["max"]) == (4, 3, 1, 4.0, 9)
    assert agg["success_fraction"] == 0.75
    jsonschema.validate(s.to_dict(), BENCH_SCHEMA)
    empty = BenchSummary.from_trials("coupon", [], "mean_T", bool).aggregate
    assert empty["count"] == 0 and empty["min"] is None
