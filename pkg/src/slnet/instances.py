"""Problem instance types and the whitespace-separated instance file format.

Format (nodes are 1-indexed on disk, 0-indexed in memory):

    c  <comment, ignored>
    p ndbd <n> <m> <L>
    p slst <n> <m> <root> <num_terminals>
    p spanner <n> <m> <alpha as num/den>
    t <terminal> <bound>          (slst only, num_terminals lines)
    a <tail> <head> <cost> <length>   (m lines)

Writing canonicalizes ordering: terminals ascending, edges sorted by
(tail, head, cost, length).  Comments are dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .graphs import Digraph, all_pairs_shortest_lengths

KINDS = ("ndbd", "slst", "spanner")


@dataclass(frozen=True)
class NdbdInstance:
    graph: Digraph
    bound: int

    kind = "ndbd"


@dataclass(frozen=True)
class SlstInstance:
    graph: Digraph
    root: int
    terminals: frozenset[int]
    bounds: dict[int, int]

    kind = "slst"


@dataclass(frozen=True)
class SpannerInstance:
    graph: Digraph
    stretch: Fraction

    kind = "spanner"


Instance = NdbdInstance | SlstInstance | SpannerInstance


def check_feasible(inst: NdbdInstance) -> bool:
    """True iff every ordered pair already meets the bound in the full graph.

    A spanning subgraph can only increase distances, so this is exactly the
    precondition for the bounded-distance problem to have any solution.
    """
    L = inst.bound
    for row in all_pairs_shortest_lengths(inst.graph):
        if any(d > L for d in row):
            return False
    return True


def _natural(tok: str, line_no: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(line_no, f"{what} is not an integer: {tok!r}") from None
    if value < 0:
        raise ParseError(line_no, f"{what} must be a natural number, got {value}")
    return value


def _node(tok: str, n: int, line_no: int, what: str) -> int:
    value = _natural(tok, line_no, what)
    if not (1 <= value <= n):
        raise ParseError(line_no, f"{what} {value} out of range 1..{n}")
    return value - 1


def parse_instance(data: bytes | str) -> Instance:
    """Parse an instance file; malformed input raises ParseError with a line number."""
    text = data.decode() if isinstance(data, bytes) else data
    lines = text.splitlines()
    header = None
    header_no = 0
    terminals: dict[int, int] = {}
    edges: list[tuple[int, int, int, int]] = []
    n = m = 0
    kind = ""
    root = -1
    want_terminals = 0
    param: int | Fraction = 0

    for line_no, raw in enumerate(lines, start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        if header is None:
            if tag != "p":
                raise ParseError(line_no, f"expected 'p' header, got {tag!r}")
            if len(tokens) < 4:
                raise ParseError(line_no, "header too short")
            kind = tokens[1]
            if kind not in KINDS:
                raise ParseError(line_no, f"unknown problem kind {kind!r}")
            n = _natural(tokens[2], line_no, "node count")
            m = _natural(tokens[3], line_no, "edge count")
            params = tokens[4:]
            if kind == "ndbd":
                if len(params) != 1:
                    raise ParseError(line_no, "ndbd header needs exactly one parameter L")
                param = _natural(params[0], line_no, "bound L")
            elif kind == "slst":
                if len(params) != 2:
                    raise ParseError(line_no, "slst header needs root and terminal count")
                root = _node(params[0], n, line_no, "root")
                want_terminals = _natural(params[1], line_no, "terminal count")
                if want_terminals < 1:
                    raise ParseError(line_no, "slst needs at least one terminal")
            else:
                if len(params) != 1:
                    raise ParseError(line_no, "spanner header needs exactly one parameter alpha")
                try:
                    param = Fraction(params[0])
                except (ValueError, ZeroDivisionError):
                    raise ParseError(line_no, f"bad stretch factor {params[0]!r}") from None
                if param < 1:
                    raise ParseError(line_no, f"stretch factor must be >= 1, got {param}")
            header = tokens
            header_no = line_no
        elif tag == "t":
            if kind != "slst":
                raise ParseError(line_no, "'t' lines are only valid for slst instances")
            if len(tokens) != 3:
                raise ParseError(line_no, "terminal line needs exactly: t <terminal> <bound>")
            t = _node(tokens[1], n, line_no, "terminal")
            if t in terminals:
                raise ParseError(line_no, f"duplicate terminal {t + 1}")
            terminals[t] = _natural(tokens[2], line_no, "terminal bound")
        elif tag == "a":
            if len(tokens) != 5:
                raise ParseError(line_no, "arc line needs exactly: a <tail> <head> <cost> <length>")
            tail = _node(tokens[1], n, line_no, "tail")
            head = _node(tokens[2], n, line_no, "head")
            cost = _natural(tokens[3], line_no, "cost")
            length = _natural(tokens[4], line_no, "length")
            edges.append((tail, head, cost, length))
        else:
            raise ParseError(line_no, f"unknown line tag {tag!r}")

    if header is None:
        raise ParseError(1, "missing 'p' header line")
    if len(edges) != m:
        raise ParseError(header_no, f"header declares {m} arcs, file has {len(edges)}")
    if kind == "slst" and len(terminals) != want_terminals:
        raise ParseError(
            header_no, f"header declares {want_terminals} terminals, file has {len(terminals)}"
        )

    graph = Digraph(n, edges)
    if kind == "ndbd":
        return NdbdInstance(graph, int(param))
    if kind == "slst":
        return SlstInstance(graph, root, frozenset(terminals), dict(sorted(terminals.items())))
    return SpannerInstance(graph, Fraction(param))


def format_instance(inst: Instance) -> str:
    """Serialize to the canonical text form (sorted terminals and edges)."""
    g = inst.graph
    out: list[str] = []
    if inst.kind == "ndbd":
        out.append(f"p ndbd {g.n} {g.m} {inst.bound}")
    elif inst.kind == "slst":
        out.append(f"p slst {g.n} {g.m} {inst.root + 1} {len(inst.terminals)}")
        for t in sorted(inst.terminals):
            out.append(f"t {t + 1} {inst.bounds[t]}")
    else:
        a = inst.stretch
        out.append(f"p spanner {g.n} {g.m} {a.numerator}/{a.denominator}")
    for e in sorted(g.edges, key=lambda e: (e.tail, e.head, e.cost, e.length)):
        out.append(f"a {e.tail + 1} {e.head + 1} {e.cost} {e.length}")
    return "\n".join(out) + "\n"
