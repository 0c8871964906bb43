"""``bihole-lab`` command line.

Reports go to stdout as one JSON object per line; human summaries go to
stderr.  ``wall_time_ms`` is null unless ``--timing`` is given, so stdout
is byte-identical across repeated runs.

Exit codes: 0 answer produced (including "infeasible"), 1 usage error,
2 input error, 3 operational failure, 4 bench suite below its thresholds.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .bihole import BiholeParams, find_bihole
from .coloring import ColoringParams, color_balanced
from .coupon import coupon_sim, expected_T
from .generators import cap_max_degree, gnnp, planted_hubs
from .graph import GraphError, describe, read_edge_list, write_edge_list
from .matching import max_matching_complement
from .oracle import chi_b_exact, max_bihole_exact, max_matching_exact
from .report import BenchSummary, TrialReport

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_FAILURE, EXIT_THRESHOLD = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _open_unit(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < x < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {x}")
    return x


def _closed_unit(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {x}")
    return x


def _count(lo: int):
    def parse(text: str) -> int:
        try:
            k = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if k < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {k}")
        return k
    return parse


def _load(path: str):
    try:
        g = read_edge_list(path)
    except (OSError, UnicodeDecodeError, GraphError) as exc:
        raise InputError(f"{path}: {exc}")
    return g


def _emit(obj) -> None:
    line = obj if isinstance(obj, str) else json.dumps(obj, separators=(",", ":"))
    sys.stdout.write(line + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _graph_desc(g, path: str) -> dict:
    d = describe(g)
    d["file"] = path
    return d


# -- single-run commands ----------------------------------------------------------

def _make_graph(model: str, n: int, p: float, seed: int, cap, hub_fraction: float, hub_degree: int):
    if model == "planted":
        g = planted_hubs(n, p * n, hub_fraction, hub_degree, seed)
    else:
        g = gnnp(n, p, seed)
    if cap is not None:
        g = cap_max_degree(g, cap)
    return g


def cmd_gen(args) -> int:
    p = args.p if args.p is not None else args.delta / args.n if args.n else 0.0
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"p = delta/n = {p} is not a probability")
    g = _make_graph(args.model, args.n, p, args.seed, args.cap, args.hub_fraction, args.hub_degree)
    write_edge_list(g, args.out)
    desc = {"model": args.model, "n": args.n, "p": p, "seed": args.seed, "cap": args.cap}
    desc.update(_graph_desc(g, args.out))
    _emit(desc)
    _note(f"wrote {args.out}: {g.edge_count} edges, max degree {desc['max_degree']}")
    return EXIT_OK


def cmd_find_bihole(args) -> int:
    g = _load(args.input)
    bh, report = find_bihole(g, BiholeParams(args.epsilon, args.retries, args.seed))
    report.graph["file"] = args.input
    if args.emit_witness:
        with open(args.emit_witness, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(" ".join(map(str, bh.left_set)) + "\n")
            fh.write(" ".join(map(str, bh.right_set)) + "\n")
    _emit(report.to_json(args.timing))
    m = report.metrics
    _note(f"bi-hole size {m['t']} (target {m['target']}, {'met' if m['target_met'] else 'missed'})")
    return EXIT_OK


def cmd_color(args) -> int:
    g = _load(args.input)
    params = ColoringParams(args.epsilon, args.seed, args.resample_cap, args.retries)
    coloring, trace, report = color_balanced(g, params)
    report.graph["file"] = args.input
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(trace.summary(), fh, indent=2)
            fh.write("\n")
    _emit(report.to_json(args.timing))
    if coloring is None:
        _note(f"{report.outcome} ({trace.phase_taken.value})")
        return EXIT_OK if report.outcome == "infeasible" else EXIT_FAILURE
    _note(f"{coloring.palette_size} colors via {trace.phase_taken.value} "
          f"(bound {report.metrics.get('palette_bound')})")
    return EXIT_OK


def cmd_check_colorable(args) -> int:
    g = _load(args.input)
    if not g.is_balanced:
        raise InputError(f"graph is not balanced ({g.left_count}x{g.right_count})")
    m = max_matching_complement(g)
    _emit({"balanced_colorable": m.perfect, "matching_size": m.size})
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _load(args.input)
    start = time.perf_counter()
    outcome = "ok"
    if args.mode == "bihole":
        res = max_bihole_exact(g)
        metrics = {"optimum": res.optimum, "explored": res.explored,
                   "left_set": list(res.witness.left_set), "right_set": list(res.witness.right_set)}
    elif args.mode == "chib":
        res = chi_b_exact(g)
        metrics = {"optimum": res.optimum, "explored": res.explored}
        if res.feasible:
            metrics.update(left_colors=list(res.witness.left_colors), right_colors=list(res.witness.right_colors))
        else:
            outcome = "infeasible"
    else:
        metrics = {"optimum": max_matching_exact(g, complement=not args.direct), "complement": not args.direct}
    report = TrialReport(f"oracle-{args.mode}", _graph_desc(g, args.input), {"mode": args.mode}, outcome,
                         metrics, (time.perf_counter() - start) * 1000.0)
    _emit(report.to_json(args.timing))
    _note(f"{args.mode} optimum: {metrics['optimum']}")
    return EXIT_OK


def _coupon_report(q: int, delta: int, trials: int, seed: int, timing_start: float) -> TrialReport:
    stats = coupon_sim(q, delta, trials, seed)
    metrics = stats.to_dict()
    metrics["expected_T"] = expected_T(q)
    return TrialReport("coupon", None, {"q": q, "delta": delta, "trials": trials, "seed": seed}, "ok",
                       metrics, (time.perf_counter() - timing_start) * 1000.0)


def cmd_coupon(args) -> int:
    report = _coupon_report(args.q, args.delta, args.trials, args.seed, time.perf_counter())
    _emit(report.to_json(args.timing))
    m = report.metrics
    _note(f"q={args.q}: mean T {m['mean_T']:.3f} (exact {m['expected_T']:.3f}), "
          f"var {m['var_T']:.3f}, P[T <= {args.delta}] = {m['p_hat']:.4f}")
    return EXIT_OK


# -- bench --------------------------------------------------------------------

BENCH_DEFAULTS = {
    "bihole": {"n": 20000, "delta": 64.0, "epsilon": 0.5},
    "color": {"n": 200, "delta": 8.0, "epsilon": 0.5},
    "coupon": {"q": 20, "delta": 64.0, "trials": 100000},
}

CSV_COLUMNS = {
    "bihole": ["t", "target", "target_met", "attempts"],
    "color": ["phase_taken", "palette_size", "palette_bound", "S_size", "resample_count", "residual_max_degree"],
    "coupon": ["p_hat", "mean_T", "var_T"],
}


def _bench_trial(suite: str, opts: dict, seed: int) -> dict:
    start = time.perf_counter()
    if suite == "coupon":
        report = _coupon_report(opts["q"], int(opts["delta"]), opts["trials"], seed, start)
    else:
        n = opts["n"]
        g = _make_graph(opts["model"], n, min(1.0, opts["delta"] / n), seed, opts["cap"],
                        opts["hub_fraction"], opts["hub_degree"])
        try:
            if suite == "bihole":
                _, report = find_bihole(g, BiholeParams(opts["epsilon"], opts["retries"], seed))
            else:
                _, _, report = color_balanced(
                    g, ColoringParams(opts["epsilon"], seed, opts["resample_cap"], opts["retries"]))
        except Exception as exc:   # recorded, the suite carries on
            report = TrialReport(suite, describe(g), {"seed": seed}, "failure", {"error": str(exc)})
        report.graph["seed"] = seed
        report.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return report.to_dict(opts["timing"])


def _thresholds(suite: str, opts: dict) -> dict:
    if suite == "bihole":
        return {"min_success_fraction": 0.9}
    if suite == "color":
        return {"min_success_fraction": 1.0}
    mu = expected_T(opts["q"])
    return {"min_success_fraction": 1.0, "mean_T_range": [0.95 * mu, 1.05 * mu], "max_var_T": 2.0 * opts["q"] ** 2}


def _success(suite: str, thresholds: dict):
    if suite == "bihole":
        return lambda row: row["outcome"] == "target_met"
    if suite == "color":
        return lambda row: row["outcome"] in ("colored", "infeasible")
    lo, hi = thresholds["mean_T_range"]
    return lambda row: lo <= row["metrics"]["mean_T"] <= hi and row["metrics"]["var_T"] < thresholds["max_var_T"]


def _workers() -> int:
    raw = os.environ.get("BIHOLE_LAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InputError(f"BIHOLE_LAB_THREADS must be an integer, got {raw!r}")
    return os.cpu_count() or 1


def cmd_bench(args) -> int:
    opts = dict(BENCH_DEFAULTS[args.suite])
    for key in ("n", "delta", "epsilon", "q", "trials"):
        if getattr(args, key) is not None:
            opts[key] = getattr(args, key)
    opts.update(retries=args.retries if args.retries is not None else (3 if args.suite == "bihole" else 2),
                resample_cap=args.resample_cap, cap=args.cap, model=args.model,
                hub_fraction=args.hub_fraction, hub_degree=args.hub_degree, timing=args.timing)
    seeds = list(range(args.seed, args.seed + args.seeds))
    workers = min(_workers(), len(seeds))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_trial, [args.suite] * len(seeds), [opts] * len(seeds), seeds))
    else:
        rows = [_bench_trial(args.suite, opts, s) for s in seeds]

    thresholds = _thresholds(args.suite, opts)
    metric = {"bihole": "t", "color": "palette_size", "coupon": "mean_T"}[args.suite]
    summary = BenchSummary.from_trials(args.suite, rows, metric, _success(args.suite, thresholds))
    passed = summary.aggregate["success_fraction"] >= thresholds["min_success_fraction"]
    doc = summary.to_dict()
    doc.update(thresholds=thresholds, passed=passed)
    _emit(doc)

    if args.csv:
        cols = CSV_COLUMNS[args.suite]
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed", "outcome"] + cols + ["wall_time_ms"])
            for s, row in zip(seeds, rows):
                w.writerow([s, row["outcome"]] + [row["metrics"].get(c, "") for c in cols]
                           + ["" if row["wall_time_ms"] is None else row["wall_time_ms"]])
    agg = summary.aggregate
    _note(f"{args.suite}: {agg['successes']}/{agg['count']} ok, {metric} "
          f"min/median/max {agg['min']}/{agg['median']}/{agg['max']} -> {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_THRESHOLD


# -- parser -------------------------------------------------------------------

def _add_model_flags(p) -> None:
    p.add_argument("--model", choices=["gnnp", "planted"], default="gnnp",
                   help="planted: sparse base with a block of degree --hub-degree right vertices")
    p.add_argument("--cap", type=_count(0), default=None, help="delete edges until max degree <= CAP")
    p.add_argument("--hub-fraction", type=_closed_unit, default=0.05)
    p.add_argument("--hub-degree", type=_count(0), default=16)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bihole-lab", description="Bi-holes and balanced colorings of bipartite graphs.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("gen", help="generate a random balanced bipartite graph")
    p.add_argument("--n", type=_count(0), required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=_closed_unit)
    g.add_argument("--delta", type=float, help="expected degree; p = delta / n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_model_flags(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("find-bihole", help="randomized large bi-hole search")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=_open_unit, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=_count(0), default=3)
    p.add_argument("--emit-witness", metavar="PATH", help="write left and right index lines")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_find_bihole)

    p = sub.add_parser("color", help="balanced coloring pipeline")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=_open_unit, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=_count(0), default=2)
    p.add_argument("--resample-cap", type=_count(1), default=None)
    p.add_argument("--trace-out", metavar="PATH", help="write per-phase counts as JSON")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("check-colorable", help="does a balanced coloring exist?")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_check_colorable)

    p = sub.add_parser("oracle", help="exhaustive ground truth for small graphs")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["bihole", "chib", "matching"], required=True)
    p.add_argument("--direct", action="store_true", help="matching mode: match in the graph, not its complement")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("coupon", help="coupon-collector simulation")
    p.add_argument("--q", type=_count(1), required=True)
    p.add_argument("--delta", type=_count(0), default=64)
    p.add_argument("--trials", type=_count(1), default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_coupon)

    p = sub.add_parser("bench", help="multi-seed suite with pass/fail thresholds")
    p.add_argument("--suite", choices=["bihole", "color", "coupon"], required=True)
    p.add_argument("--seeds", type=_count(1), default=10)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--n", type=_count(1))
    p.add_argument("--delta", type=float)
    p.add_argument("--epsilon", type=_open_unit)
    p.add_argument("--retries", type=_count(0))
    p.add_argument("--resample-cap", type=_count(1))
    p.add_argument("--q", type=_count(1))
    p.add_argument("--trials", type=_count(1))
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--timing", action="store_true")
    _add_model_flags(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:   # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        _note(f"bihole-lab: error: {exc}")
        return EXIT_USAGE
    except (InputError, GraphError) as exc:
        _note(f"bihole-lab: input error: {exc}")
        return EXIT_INPUT
    except Exception as exc:
        _note(f"bihole-lab: failed: {type(exc).__name__}: {exc}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
