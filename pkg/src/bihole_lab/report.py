"""Per-run and per-bench report records and their JSON schema."""

from __future__ import annotations

import json
import statistics
from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass
class TrialReport:
    algorithm: str
    graph: Optional[dict]
    params: dict
    outcome: str
    metrics: dict = field(default_factory=dict)
    wall_time_ms: Optional[float] = None

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d["wall_time_ms"] = None
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), separators=(",", ":"))


OUTCOMES = ("target_met", "target_missed", "colored", "infeasible", "failure", "ok")

TRIAL_SCHEMA = {
    "type": "object",
    "required": ["algorithm", "graph", "params", "outcome", "metrics", "wall_time_ms"],
    "additionalProperties": False,
    "properties": {
        "algorithm": {"type": "string"},
        "graph": {
            "type": ["object", "null"],   # null for runs without an input graph (coupon)
            "required": ["left_count", "right_count", "edge_count", "avg_degree", "max_degree"],
            "properties": {
                "left_count": {"type": "integer", "minimum": 0},
                "right_count": {"type": "integer", "minimum": 0},
                "edge_count": {"type": "integer", "minimum": 0},
                "avg_degree": {"type": "number", "minimum": 0},
                "max_degree": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer"},
                "file": {"type": "string"},
            },
        },
        "params": {"type": "object"},
        "outcome": {"enum": list(OUTCOMES)},
        "metrics": {"type": "object"},
        "wall_time_ms": {"type": ["number", "null"], "minimum": 0},
    },
}


@dataclass
class BenchSummary:
    suite: str
    trials: list[dict]
    aggregate: dict

    @classmethod
    def from_trials(cls, suite: str, trials: list[dict], value_key: str, success) -> "BenchSummary":
        """Aggregate rows; ``success`` maps a row to bool, ``value_key`` names the metric summarised."""
        values = [t["metrics"][value_key] for t in trials if value_key in t.get("metrics", {})]
        ok = [bool(success(t)) for t in trials]
        agg = {
            "count": len(trials),
            "successes": sum(ok),
            "success_fraction": (sum(ok) / len(trials)) if trials else 0.0,
            "metric": value_key,
            "min": min(values) if values else None,
            "median": statistics.median(values) if values else None,
            "max": max(values) if values else None,
        }
        return cls(suite, trials, agg)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "aggregate": self.aggregate}


BENCH_SCHEMA = {
    "type": "object",
    "required": ["suite", "trials", "aggregate"],
    "properties": {
        "suite": {"enum": ["bihole", "color", "coupon"]},
        "trials": {"type": "array", "items": {"type": "object"}},
        "aggregate": {
            "type": "object",
            "required": ["count", "successes", "success_fraction", "metric", "min", "median", "max"],
        },
        "thresholds": {"type": "object"},
        "passed": {"type": "boolean"},
    },
}
