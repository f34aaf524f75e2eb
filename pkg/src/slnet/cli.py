"""Command-line surface.

One binary, subcommand style; every run is reproducible from its arguments
plus --seed.  Node ids on the command line and in all output are 1-based to
match the instance file format; edges in reports are 1-based indices into
the instance's (canonically sorted) arc list.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bench as bench_mod
from .errors import SlnetError
from .gen import generate_instance
from .graphs import shortest_lengths_from, tree_distances
from .instances import (
    NdbdInstance,
    SlstInstance,
    SpannerInstance,
    format_instance,
    parse_instance,
)
from .oracle import exact_dslst, exact_ndbd, exact_spanner
from .pipelines import ndbd_demands, solve_ndbd, solve_spanner, spanner_demands, verify_solution
from .reports import RunReport, write_report
from .rsp import min_cost_path_relaxed, rsp_exact
from .slst import SlstParams, ratio_bound, shallow_light
from .thick import classify_pairs_diagnostic
from .thinlp import PairDemand, solve_fractional


def _read_instance(path: str):
    return parse_instance(Path(path).read_bytes())


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    inst = generate_instance(
        args.kind,
        args.n,
        args.m,
        args.seed,
        max_cost=args.max_cost,
        max_length=args.max_length,
        bound=args.L,
        alpha=Fraction(args.alpha) if args.alpha else None,
        terminals=args.terminals,
        slack=Fraction(args.slack),
    )
    text = format_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_rsp(args) -> int:
    inst = _read_instance(args.input)
    g = inst.graph
    src, dst = args.src - 1, args.dst - 1
    if args.exact:
        w = rsp_exact(g, src, dst, args.bound)
    else:
        w = min_cost_path_relaxed(g, src, dst, args.bound, Fraction(args.eps))
    if w is None:
        _emit({"infeasible": True}, None)
        return 1
    _emit(
        {"cost": w.total_cost, "length": w.total_length, "edges": [e + 1 for e in w.edges]},
        None,
    )
    return 0


def _cmd_solve_slst(args) -> int:
    inst = _read_instance(args.input)
    if not isinstance(inst, SlstInstance):
        raise SlnetError("solve-slst needs an slst instance")
    eps1 = Fraction(args.eps)
    params = SlstParams(
        level=args.level, eps1=eps1, k=args.k,
        max_kprime=args.max_kprime, max_rungs=args.max_rungs,
    )
    tree = shallow_light(
        inst.graph, args.level, inst.root, inst.terminals, inst.bounds,
        k=args.k, eps1=eps1, params=params,
    )
    dist = tree_distances(inst.graph, tree.edges, inst.root)
    per_terminal = {}
    worst = 0.0
    for t in sorted(inst.terminals):
        if t in dist:
            v = dist[t] / inst.bounds[t] if inst.bounds[t] else float(dist[t] > 0)
            worst = max(worst, v)
            per_terminal[str(t + 1)] = {
                "distance": dist[t], "bound": inst.bounds[t], "violation": v,
            }
    run_params = {"eps": float(eps1), "level": args.level, "seed": None,
                  "gamma": None, "delta": None}
    if params.max_kprime is not None or params.max_rungs is not None:
        run_params["pruned"] = True  # guarantees are heuristic under pruning
    report = RunReport(
        instance=args.input,
        params=run_params,
        edges=sorted(e + 1 for e in tree.edges),
        cost=tree.cost(inst.graph),
        max_violation_factor=worst,
        per_stage_timings_ms={},
        settled_pairs=len(per_terminal),
        total_pairs=len(inst.terminals),
        extra={"per_terminal": per_terminal, "root": inst.root + 1},
    )
    _write_report_out(report, args.out)
    return 0


def _write_report_out(report: RunReport, out: str | None) -> None:
    data = write_report(report)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _cmd_solve_ndbd(args) -> int:
    inst = _read_instance(args.input)
    if not isinstance(inst, NdbdInstance):
        raise SlnetError("solve-ndbd needs an ndbd instance")
    edges, report = solve_ndbd(
        inst, Fraction(args.eps), level=args.level, seed=args.seed, instance_label=args.input
    )
    _write_report_out(report, args.out)
    check = verify_solution(inst.graph, edges, "ndbd", bound=inst.bound, eps=Fraction(args.eps))
    return 0 if check["ok"] else 1


def _cmd_solve_spanner(args) -> int:
    inst = _read_instance(args.input)
    if not isinstance(inst, SpannerInstance):
        raise SlnetError("solve-spanner needs a spanner instance")
    edges, report = solve_spanner(
        inst, Fraction(args.eps), level=args.level, seed=args.seed, instance_label=args.input
    )
    _write_report_out(report, args.out)
    check = verify_solution(
        inst.graph, edges, "spanner", stretch=inst.stretch, eps=Fraction(args.eps)
    )
    return 0 if check["ok"] else 1


def _load_demand_file(path: str, g) -> list[PairDemand]:
    demands = []
    for line in Path(path).read_text().splitlines():
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        u, v = int(tokens[0]) - 1, int(tokens[1]) - 1
        demands.append(PairDemand((u, v), Fraction(tokens[2])))
    return demands


def _cmd_lp(args) -> int:
    inst = _read_instance(args.input)
    g = inst.graph
    if args.demands != "all":
        demands = _load_demand_file(args.demands, g)
    elif isinstance(inst, NdbdInstance):
        demands = ndbd_demands(inst)
    elif isinstance(inst, SpannerInstance):
        demands = spanner_demands(inst)
    else:
        dist = shortest_lengths_from(g, inst.root)
        demands = [PairDemand((inst.root, t), inst.bounds[t]) for t in sorted(inst.terminals)]
    sol = solve_fractional(g, demands, float(Fraction(args.eps)))
    _emit(
        {
            "objective": sol.objective,
            "nonzero_x": {str(e + 1): v for e, v in sorted(sol.x.items()) if v > 1e-12},
            "columns_count": sum(len(cols) for cols in sol.columns.values()),
        },
        args.out,
    )
    return 0


def _cmd_classify(args) -> int:
    inst = _read_instance(args.input)
    if args.bound is not None:
        bound = args.bound
    elif isinstance(inst, NdbdInstance):
        bound = inst.bound
    else:
        raise SlnetError("--bound is required for non-ndbd instances")
    labels = classify_pairs_diagnostic(inst.graph, bound)
    counts = {"thin": 0, "thick": 0, "unknown": 0}
    for value in labels.values():
        counts[value] += 1
    _emit(
        {
            "bound": bound,
            "counts": counts,
            "pairs": {f"{u + 1},{v + 1}": lab for (u, v), lab in sorted(labels.items())},
        },
        args.out,
    )
    return 0


def _cmd_oracle(args) -> int:
    inst = _read_instance(args.input)
    if args.problem == "slst":
        if not isinstance(inst, SlstInstance):
            raise SlnetError("oracle --problem slst needs an slst instance")
        k = args.k if args.k is not None else len(inst.terminals)
        tree = exact_dslst(inst, k)
        _emit(
            {
                "cost": tree.cost(inst.graph),
                "edges": sorted(e + 1 for e in tree.edges),
                "covered": {str(t + 1): d for t, d in sorted(tree.distances.items())},
            },
            args.out,
        )
    elif args.problem == "ndbd":
        if not isinstance(inst, NdbdInstance):
            raise SlnetError("oracle --problem ndbd needs an ndbd instance")
        edges = exact_ndbd(inst)
        _emit({"cost": inst.graph.edge_cost(edges), "edges": sorted(e + 1 for e in edges)}, args.out)
    else:
        if not isinstance(inst, SpannerInstance):
            raise SlnetError("oracle --problem spanner needs a spanner instance")
        edges = exact_spanner(inst)
        _emit({"cost": inst.graph.edge_cost(edges), "edges": sorted(e + 1 for e in edges)}, args.out)
    return 0


def _cmd_verify(args) -> int:
    inst = _read_instance(args.input)
    report = json.loads(Path(args.report).read_text())
    edges = frozenset(e - 1 for e in report["edges"])
    eps = report.get("params", {}).get("eps") or 0
    if isinstance(inst, NdbdInstance):
        res = verify_solution(inst.graph, edges, "ndbd", bound=inst.bound, eps=eps)
    elif isinstance(inst, SpannerInstance):
        res = verify_solution(inst.graph, edges, "spanner", stretch=inst.stretch, eps=eps)
    else:
        slack = 1 + Fraction(str(eps)) if eps else 1
        dist = tree_distances(inst.graph, edges, inst.root)
        offending = [
            (inst.root + 1, t + 1, float(dist.get(t, math.inf) / inst.bounds[t]))
            for t in sorted(inst.terminals)
            if dist.get(t, math.inf) > slack * inst.bounds[t]
        ]
        worst = max(
            (dist.get(t, math.inf) / inst.bounds[t] for t in inst.terminals if inst.bounds[t]),
            default=0.0,
        )
        res = {"ok": not offending, "worst_violation": float(worst), "offending": offending}
    _emit(res, args.out)
    return 0 if res["ok"] else 1


def _cmd_bench(args) -> int:
    cfg = json.loads(Path(args.config).read_text())
    rows = bench_mod.run_suite(cfg)
    csv_text = bench_mod.to_csv(rows)
    if args.out_csv:
        Path(args.out_csv).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.out_json:
        Path(args.out_json).write_text(bench_mod.to_json(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slnet",
        description="Solvers for distance-bounded directed network design, "
        "shallow-light Steiner trees, and light directed spanners.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--kind", required=True, choices=["ndbd", "slst", "spanner"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-cost", type=int, default=50)
    p.add_argument("--max-length", type=int, default=10)
    p.add_argument("--L", type=int, default=None, help="ndbd bound (default: backbone length)")
    p.add_argument("--alpha", default=None, help="spanner stretch, e.g. 3/2")
    p.add_argument("--terminals", type=int, default=None)
    p.add_argument("--slack", default="3/2", help="terminal bound slack factor (slst)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("rsp", help="length-bounded cheapest path query")
    p.add_argument("--input", required=True)
    p.add_argument("--from", dest="src", type=int, required=True)
    p.add_argument("--to", dest="dst", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=_cmd_rsp)

    p = sub.add_parser("solve-slst", help="approximate shallow-light Steiner tree")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", default="1/4")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--max-kprime", type=int, default=None, help="heuristic pruning cap")
    p.add_argument("--max-rungs", type=int, default=None, help="heuristic pruning cap")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_solve_slst)

    for name, fn in (("solve-ndbd", _cmd_solve_ndbd), ("solve-spanner", _cmd_solve_spanner)):
        p = sub.add_parser(name, help=f"{name} end to end; exit 0 iff the verifier passes")
        p.add_argument("--input", required=True)
        p.add_argument("--eps", default="1/2")
        p.add_argument("--level", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.set_defaults(func=fn)

    p = sub.add_parser("lp", help="fractional covering relaxation by column generation")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", default="1/10")
    p.add_argument("--demands", default="all", help="'all' or a file of 'u v bound' lines")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lp)

    p = sub.add_parser("classify", help="thin/thick pair diagnostic")
    p.add_argument("--input", required=True)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("oracle", help="exact brute-force optimum (desk scale)")
    p.add_argument("--input", required=True)
    p.add_argument("--problem", required=True, choices=["ndbd", "slst", "spanner"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="re-check a report against its instance")
    p.add_argument("--input", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="run a seeded suite and emit CSV/JSON tables")
    p.add_argument("--config", required=True)
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SlnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
