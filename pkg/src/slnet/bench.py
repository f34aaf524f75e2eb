"""Benchmark suites: seeded instance families with solver/oracle comparisons.

A suite config is a JSON object:

    {"problem": "slst" | "ndbd", "count": 100, "n": 8 | [5, 8], "m": 14 | [lo, hi],
     "max_cost": 50, "max_length": 10, "eps": "1/4", "level": 2, "seed": 0,
     "terminals": 3, "slack": "3/2", "bound": null}

Row i uses seed base_seed + i for both its size draws and its instance.  Rows
run on a small thread pool (capped by SLNET_THREADS) and are emitted sorted
by index, so output is independent of scheduling.  Solver or oracle errors
leave that row's result columns empty and the suite continues.

CSV uses '.' decimals, ',' separators and LF line endings.
"""
from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any

from .errors import SlnetError
from .gen import generate_instance
from .graphs import tree_distances
from .instances import SlstInstance
from .oracle import DSLST_EDGE_CAP, SUBGRAPH_EDGE_CAP, exact_dslst, exact_ndbd
from .pipelines import solve_ndbd
from .slst import ratio_bound, shallow_light

COLUMNS = [
    "n", "m", "seed", "approx_cost", "oracle_cost", "ratio", "violation", "bound", "runtime_ms",
]


def _pick(rng: random.Random, spec: Any) -> int:
    if isinstance(spec, list):
        return rng.randint(spec[0], spec[1])
    return int(spec)


def _run_row(cfg: dict, index: int) -> dict[str, Any]:
    seed = int(cfg.get("seed", 0)) + index
    rng = random.Random(seed)
    n = _pick(rng, cfg.get("n", 8))
    m = _pick(rng, cfg.get("m", 2 * n))
    eps = Fraction(str(cfg.get("eps", "1/4")))
    level = int(cfg.get("level", 2))
    row: dict[str, Any] = {"n": n, "m": m, "seed": seed}
    for col in COLUMNS[3:]:
        row[col] = None
    problem = cfg["problem"]
    try:
        start = time.perf_counter()
        if problem == "slst":
            inst = generate_instance(
                "slst", n, m, seed,
                max_cost=int(cfg.get("max_cost", 50)),
                max_length=int(cfg.get("max_length", 10)),
                terminals=cfg.get("terminals"),
                slack=Fraction(str(cfg.get("slack", "3/2"))),
            )
            assert isinstance(inst, SlstInstance)
            tree = shallow_light(
                inst.graph, level, inst.root, inst.terminals, inst.bounds, eps1=eps
            )
            row["approx_cost"] = tree.cost(inst.graph)
            dist = tree_distances(inst.graph, tree.edges, inst.root)
            row["violation"] = max(
                (dist[t] / inst.bounds[t] for t in inst.terminals if t in dist and inst.bounds[t]),
                default=0.0,
            )
            if level >= 2:
                row["bound"] = ratio_bound(level, len(inst.terminals))
            if inst.graph.m <= DSLST_EDGE_CAP:
                oracle = exact_dslst(inst, len(inst.terminals))
                row["oracle_cost"] = oracle.cost(inst.graph)
        elif problem == "ndbd":
            inst = generate_instance(
                "ndbd", n, m, seed,
                max_cost=int(cfg.get("max_cost", 50)),
                max_length=int(cfg.get("max_length", 10)),
                bound=cfg.get("bound"),
            )
            edges, report = solve_ndbd(inst, eps, level=level, seed=seed)
            row["approx_cost"] = report.cost
            row["violation"] = report.max_violation_factor
            row["bound"] = float(2 * (1 + eps))
            if inst.graph.m <= SUBGRAPH_EDGE_CAP:
                opt = exact_ndbd(inst)
                row["oracle_cost"] = inst.graph.edge_cost(opt)
        else:
            raise SlnetError(f"unknown bench problem {problem!r}")
        row["runtime_ms"] = (time.perf_counter() - start) * 1000.0
        if row["approx_cost"] is not None and row["oracle_cost"]:
            row["ratio"] = row["approx_cost"] / row["oracle_cost"]
    except SlnetError:
        pass  # leave result columns empty, keep the suite going
    return row


def run_suite(cfg: dict) -> list[dict[str, Any]]:
    count = int(cfg.get("count", 0))
    workers = int(os.environ.get("SLNET_THREADS", "0")) or min(4, max(1, count))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda i: _run_row(cfg, i), range(count)))
    return rows  # pool.map preserves index order


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(rows: list[dict[str, Any]]) -> str:
    lines = [",".join(COLUMNS)]
    for row in rows:
        lines.append(",".join(_cell(row[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def to_json(rows: list[dict[str, Any]]) -> str:
    return json.dumps(rows, sort_keys=True, indent=2) + "\n"
