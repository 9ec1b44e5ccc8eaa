"""Exception hierarchy shared by every part of the package."""

from __future__ import annotations


class LimitLogError(Exception):
    """Base class for all errors raised by limitlog."""


class ParseError(LimitLogError):
    """Lexical or syntactic problem in program text.

    ``line`` and ``col`` are 1-based and may be ``None`` when the error is not
    tied to a position (for instance when a query is built programmatically).
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class SortError(ParseError):
    """A term was used at a position of the wrong sort, or arity mismatch."""


class UnsafeRuleError(ParseError):
    """A rule variable does not occur in any standard body atom."""


class ValidationError(ParseError):
    """The program parsed but violates the shape of limit programs."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        super().__init__(first.message, first.line, first.col)


class AnalysisError(LimitLogError):
    """Static-analysis rejection: not limit-linear or not type-consistent."""

    def __init__(self, message: str, violations=()):
        self.violations = list(violations)
        super().__init__(message)


class NotLimitLinearError(AnalysisError):
    pass


class StabilityGateError(AnalysisError):
    pass


class ContractError(LimitLogError):
    """An operation was called on input outside its documented domain."""


class DivergenceError(LimitLogError):
    """The fixpoint loop exceeded its iteration budget or revisited a state."""

    def __init__(self, message: str, iterations: int):
        self.iterations = iterations
        super().__init__(message)
