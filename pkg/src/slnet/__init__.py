"""Bicriteria solvers for directed network design with bounded distances,
directed shallow-light Steiner trees, and light-weight directed spanners."""

from .graphs import Digraph, PathWitness, TreeSolution
from .instances import (
    NdbdInstance,
    SlstInstance,
    SpannerInstance,
    check_feasible,
    format_instance,
    parse_instance,
)

__all__ = [
    "Digraph",
    "PathWitness",
    "TreeSolution",
    "NdbdInstance",
    "SlstInstance",
    "SpannerInstance",
    "check_feasible",
    "format_instance",
    "parse_instance",
]

__version__ = "0.1.0"
