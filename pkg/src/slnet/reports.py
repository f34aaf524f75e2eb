"""Run reports and their canonical JSON encoding.

The JSON form is byte-stable for fixed content: keys sorted, two-space
indent, LF line endings, floats via repr.  Timing values are the only
fields that vary between identical runs; strip_timings exists so callers
can compare the solution-bearing bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class RunReport:
    instance: str
    params: dict[str, Any]  # eps, level, seed, gamma, delta
    edges: list[int]  # 1-based indices into the instance file's arc list
    cost: int
    max_violation_factor: float
    per_stage_timings_ms: dict[str, float]
    settled_pairs: int
    total_pairs: int
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "instance": self.instance,
            "params": self.params,
            "edges": self.edges,
            "cost": self.cost,
            "max_violation_factor": self.max_violation_factor,
            "per_stage_timings_ms": self.per_stage_timings_ms,
            "settled_pairs": self.settled_pairs,
            "total_pairs": self.total_pairs,
        }
        d.update(self.extra)
        return d


def write_report(report: RunReport) -> bytes:
    return (json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n").encode()


def strip_timings(report_json: bytes | str) -> bytes:
    """The same report with every timing value zeroed, for byte comparisons."""
    obj = json.loads(report_json)
    if "per_stage_timings_ms" in obj:
        obj["per_stage_timings_ms"] = {k: 0.0 for k in obj["per_stage_timings_ms"]}
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()
