"""
Exception hierarchy shared by every module of the toolkit.
"""

from typing import Optional


class CqaError(Exception):
    """Base class for all toolkit errors."""


class QueryParseError(CqaError):
    """A word, BCQ or generalized query could not be parsed."""

    def __init__(self, message: str, text: str = "", offset: int = 0):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class FactParseError(CqaError):
    """A line of a fact, graph, CNF or circuit file is malformed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PreconditionError(CqaError):
    """An operation was called outside its domain."""


class EmptyQueryError(PreconditionError):
    def __init__(self, operation: str = "operation"):
        super().__init__(f"{operation} requires a non-empty query")


class InconsistentInstanceError(PreconditionError):
    """A consistent instance (a repair) was required."""


class MethodNotApplicable(PreconditionError):
    """The requested solver does not cover the query's class."""


class RepairCapExceeded(CqaError):
    """Repair enumeration or search would exceed the configured cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"instance too large for enumeration: {count} exceeds cap {cap}"
        )


class FallbackRequired(CqaError):
    """The NL procedure cannot align the query; use the fixpoint instead."""


class UnboundVariableError(CqaError):
    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"unbound variable: {variable}")


class MinimalRepairError(CqaError):
    """No fact of a block attains the block-wide minimal states set."""
