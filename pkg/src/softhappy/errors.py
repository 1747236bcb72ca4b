"""Exception types shared across the package."""


class SoftHappyError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SoftHappyError):
    """Malformed instance or colouring file.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(SoftHappyError):
    """A structural invariant of a Graph, Instance, or Colouring is violated.

    ``kind`` distinguishes which invariant failed:
      vertex-range, self-loop, duplicate-edge, colour-range, community-range,
      community-partial, precolour-conflict, precolour-mismatch,
      colouring-partial, colouring-precolour
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class ConfigError(SoftHappyError):
    """Infeasible or inconsistent run configuration."""


class ParameterError(SoftHappyError):
    """Numeric parameter outside its mathematical domain."""


class UndefinedStatisticError(SoftHappyError):
    """A statistic is undefined for the given samples (e.g. zero variance)."""
