"""Shared exception types for solvers and I/O."""
from __future__ import annotations


class SlnetError(Exception):
    """Base class for all library errors."""


class ParseError(SlnetError):
    """Malformed instance file; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class Infeasible(SlnetError):
    """No solution satisfies the stated bounds."""


class BudgetTooLarge(SlnetError):
    """A dynamic-programming table would exceed the configured cell cap."""


class CapExceeded(SlnetError):
    """Instance exceeds a brute-force enumeration cap."""


class UnsatisfiableDemand(SlnetError):
    """A demand pair has no path within its length bound."""

    def __init__(self, pair: tuple[int, int], bound):
        self.pair = pair
        self.bound = bound
        super().__init__(f"demand {pair} has no path of length <= {bound}")


class IterationLimit(SlnetError):
    """Column generation exceeded the configured number of pricing rounds."""


class UnsatisfiableParams(SlnetError):
    """Instance-generator parameters cannot produce a feasible instance."""


class InfeasibleInstance(SlnetError):
    """The input instance itself violates the problem's feasibility precondition."""
