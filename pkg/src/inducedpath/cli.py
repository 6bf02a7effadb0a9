"""Command line entry point: ``inducedpath <subcommand> ...``.

Exit codes: 0 on success, 1 on a validation or regression failure, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

from . import exact_oracles as eo
from . import moment_calc as mc
from .conflict_dfs import check_expansion_hypothesis, read_instance, run_dfs
from .connector_pipeline import MODES, PRACTICAL, full_pipeline
from .forest_builder import build_induced_linear_forest, verify_induced_forest
from .graph_core import GnpParams, Graph, GraphError, read_edge_list, sample_gnp, write_edge_list
from .harness import (DEFAULT_TOLERANCE, BaselineError, CampaignError, ExperimentConfig, read_report,
                      regression_check, run_experiment, write_baseline)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _table(rows: dict) -> str:
    width = max(len(k) for k in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows.items())


def _gnp(args) -> GnpParams:
    if (args.p is None) == (args.d is None):
        raise UsageError("give exactly one of --p and --d")
    return GnpParams(args.n, args.p) if args.p is not None else GnpParams.from_degree(args.n, args.d)


def cmd_gen(args) -> int:
    g = sample_gnp(_gnp(args), args.seed)
    if args.format == "json":
        _emit(args, _dump({"n": g.n, "m": g.edge_count, "edges": g.edges().tolist()}))
    elif args.out:
        write_edge_list(g, args.out)
    else:
        e = g.edges()
        _emit(args, "\n".join([f"{g.n} {e.shape[0]}"] + [f"{u} {v}" for u, v in e.tolist()]))
    return EXIT_OK


def cmd_forest(args) -> int:
    params = _gnp(args)
    g = sample_gnp(params, args.seed)
    f = build_induced_linear_forest(g, None, args.L, args.rounds, args.seed)
    ok = verify_induced_forest(g, f, args.L)
    summary = {"n": g.n, "p": params.p, "L": args.L, "components": len(f), "order": f.order,
               "normalized_order": f.normalized_order(params.p, g.n) if params.n * params.p > 1 else None,
               "restart_orders": list(f.restart_orders), "verified": ok}
    if args.format == "json":
        _emit(args, _dump({**summary, "paths": [list(c) for c in f.components]}))
    else:
        lines = [" ".join(map(str, c)) for c in f.components]
        _emit(args, "\n".join(lines + [json.dumps(summary, sort_keys=True)]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dfs(args) -> int:
    d, cs = read_instance(args.instance)
    res = run_dfs(d, cs)
    out = {"vertices": list(res.path.vertices), "representatives": list(res.path.representatives),
           "edge_length": res.path.edge_length, "steps": res.steps, "balanced": res.balanced}
    code = EXIT_OK
    if args.k is not None:
        holds = check_expansion_hypothesis(d, cs, args.k)
        out["hypothesis_holds"] = holds
        out["guaranteed_length"] = d.n - 2 * args.k + 1
        if holds and res.path.edge_length < d.n - 2 * args.k + 1:
            code = EXIT_FAIL
    _emit(args, _dump(out) if args.format == "json" else _table(out))
    return code


def cmd_pipeline(args) -> int:
    res = full_pipeline(args.n, args.d, args.eps, args.seed, args.mode, args.rounds, keep_graph=bool(args.emit_graph))
    if args.emit_graph:
        write_edge_list(res.graph, args.emit_graph)
    rec = res.to_dict()
    if args.format == "json":
        _emit(args, _dump(rec))
    else:
        flat = {"certified": res.certified, **{k: v for k, v in asdict(res.params).items()}, **res.stats}
        _emit(args, _table(flat) + "\npath " + " ".join(map(str, res.path)))
    return EXIT_OK if res.certified else EXIT_FAIL


def _shape(kw) -> mc.ForestShape:
    if "k" not in kw:
        raise UsageError("shape needs k (and optionally e, c, delta; default is a path)")
    k = int(kw["k"])
    if "e" not in kw and "c" not in kw:
        return mc.ForestShape.path(k)
    c = int(kw.get("c", 1))
    e = int(kw.get("e", k - c))
    return mc.ForestShape(k, e, c, int(kw.get("delta", 2)))


def _profile(kw) -> eo.IntersectionProfile:
    return eo.IntersectionProfile(int(kw["s"]), int(kw["c_i"] if "c_i" in kw else kw["ci"]))


def _log_or_value(x: float, as_log: bool) -> dict:
    return {"log": x, "value": math.exp(x)} if as_log else {"value": x}


EVALUATORS = {
    "expected-copies": ("n p k [e c delta]", lambda kw: {
        "value": mc.expected_labelled_copies(int(kw["n"]), float(kw["p"]), _shape(kw)),
        "log": mc.expected_labelled_copies(int(kw["n"]), float(kw["p"]), _shape(kw), log=True)}),
    "conditional-prob": ("p k s ci [e c delta]", lambda kw: {
        "value": mc.conditional_copy_prob(float(kw["p"]), _shape(kw), _profile(kw)),
        "exponents": list(mc.conditional_exponents(_shape(kw), _profile(kw)))}),
    "compatible-bound": ("k s c delta n", lambda kw: {
        "value": mc.compatible_count_bound(int(kw["k"]), int(kw["s"]), int(kw["c"]), int(kw["delta"]), int(kw["n"])),
        "log": mc.compatible_count_bound(int(kw["k"]), int(kw["s"]), int(kw["c"]), int(kw["delta"]), int(kw["n"]),
                                         log=True)}),
    "subtree-bound": ("delta s", lambda kw: {"value": mc.subtree_count_bound(float(kw["delta"]), int(kw["s"]))}),
    "copy-prob-lower": ("n d delta eps", lambda kw: _log_or_value(
        mc.induced_copy_prob_lower_log(float(kw["n"]), float(kw["d"]), float(kw["delta"]), float(kw["eps"])), True)),
    "tmatching-first-moment": ("n p t r", lambda kw: _log_or_value(
        mc.tmatching_first_moment_log(int(kw["n"]), float(kw["p"]), int(kw["t"]), int(kw["r"])), True)),
    "talagrand": ("b t lipschitz [offset]", lambda kw: dict(zip(("threshold", "tail"), mc.talagrand_tail(
        mc.TalagrandParams(float(kw["b"]), float(kw["t"]), float(kw["lipschitz"]),
                           float(kw["offset"]) if "offset" in kw else None))))),
    "alpha": ("m p forest_order x", lambda kw: {
        "value": mc.ConnectionStats(int(kw["m"]), float(kw["p"]), int(kw["forest_order"]), int(kw["x"])).alpha}),
    "feasibility": ("n d eps m N forest_order [x]", lambda kw: asdict(mc.connection_feasibility_report(
        float(kw["n"]), float(kw["d"]), float(kw["eps"]), int(kw["m"]), float(kw["N"]), float(kw["forest_order"]),
        float(kw["x"]) if "x" in kw else None))),
}


def cmd_moments(args) -> int:
    if args.evaluator == "list":
        _emit(args, _table({name: sig for name, (sig, _) in EVALUATORS.items()}))
        return EXIT_OK
    if args.evaluator not in EVALUATORS:
        raise UsageError(f"unknown evaluator {args.evaluator!r}; try 'moments list'")
    kw = {}
    for item in args.params:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        kw[key] = val
    try:
        out = EVALUATORS[args.evaluator][1](kw)
    except KeyError as exc:
        raise UsageError(f"missing parameter {exc}; signature: {EVALUATORS[args.evaluator][0]}") from None
    out = {"evaluator": args.evaluator, **{k: kw[k] for k in sorted(kw)}, **out}
    _emit(args, _dump(out) if args.format == "json" else _table(out))
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = read_edge_list(args.graph)
    if args.problem == "longest-path":
        length, path = eo.max_induced_path_exact(g)
        out = {"edge_length": length, "path": path}
    elif args.problem == "matching":
        out = {"edges": eo.max_induced_matching_by_edges(g)}
    elif args.problem in ("tmatching", "copies"):
        if not args.pattern:
            raise UsageError(f"{args.problem} needs --pattern")
        pat = read_edge_list(args.pattern)
        if args.problem == "tmatching":
            out = {"components": eo.max_induced_tmatching_exact(g, pat.n, pat)}
        else:
            out = {"labelled_copies": eo.count_labelled_induced_copies(g, pat)}
    else:
        if args.vertex is None or args.size is None:
            raise UsageError("subtrees needs --vertex and --size")
        out = {"subtrees": eo.count_subtrees_containing(g, args.vertex, args.size)}
    out = {"problem": args.problem, **out}
    _emit(args, _dump(out) if args.format == "json" else _table(out))
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.product(args.n, args.d, args.eps, args.mode, seeds=args.seeds, base_seed=args.seed,
                                   output=args.out, fmt=args.format, forest_rounds=args.rounds,
                                   record_timing=args.timing, workers=args.workers)
    report = run_experiment(cfg)
    if not args.out:
        sys.stdout.write(report.to_csv() if args.format == "csv" else report.to_json())
    for s in report.summary:
        print(f"n={s['n']} d={s['d']:g} eps={s['eps']:g} {s['mode']}: mean {s['mean_normalized_constant']:.6g} "
              f"min {s['min_normalized_constant']:.6g} max {s['max_normalized_constant']:.6g}", file=sys.stderr)
    if args.write_baseline:
        write_baseline(report, args.write_baseline, args.tolerance or DEFAULT_TOLERANCE)
    if args.baseline:
        return _report_regression(regression_check(report, args.baseline, args.tolerance))
    return EXIT_OK


def _report_regression(res) -> int:
    if res.passed:
        print("regression check: pass", file=sys.stderr)
        return EXIT_OK
    print("regression check: FAIL", file=sys.stderr)
    for line in res.diffs:
        print("  " + line, file=sys.stderr)
    return EXIT_FAIL


def cmd_regress(args) -> int:
    return _report_regression(regression_check(read_report(args.report), args.baseline, args.tolerance))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    ap = argparse.ArgumentParser(prog="inducedpath", description="Long induced paths in sparse random graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample G(n, p) as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=float)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("forest", parents=[common], help="grow an induced linear forest in G(n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--rounds", type=int, default=1)
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("dfs", parents=[common], help="conflict-aware DFS on an instance file")
    p.add_argument("instance")
    p.add_argument("--k", type=int, help="also check the expansion hypothesis with this k")
    p.set_defaults(func=cmd_dfs)

    p = sub.add_parser("pipeline", parents=[common], help="build and certify one long induced path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--mode", choices=MODES, default=PRACTICAL)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--emit-graph", metavar="PATH")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("moments", parents=[common], help="evaluate a moment formula ('list' shows all)")
    p.add_argument("evaluator")
    p.add_argument("params", nargs="*", metavar="key=value")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("oracle", parents=[common], help="exact solvers on small graphs")
    p.add_argument("problem", choices=("longest-path", "matching", "tmatching", "copies", "subtrees"))
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern")
    p.add_argument("--vertex", type=int)
    p.add_argument("--size", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", parents=[common], help="seeded campaign over a parameter grid")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--d", type=float, nargs="+", required=True)
    p.add_argument("--eps", type=float, nargs="+", default=[0.25])
    p.add_argument("--mode", nargs="+", choices=MODES, default=[PRACTICAL])
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record runtime_ms (breaks byte-identical reruns)")
    p.add_argument("--baseline", help="regression-check the campaign against this baseline")
    p.add_argument("--write-baseline", metavar="PATH")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_experiment, format="csv")

    p = sub.add_parser("regress", parents=[common], help="compare a saved report with a baseline")
    p.add_argument("report")
    p.add_argument("baseline")
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_regress)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "experiment" and args.format == "text":
        args.format = "csv"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CampaignError, BaselineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, GraphError, OSError, eo.InstanceTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
