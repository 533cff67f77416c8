"""Exception hierarchy. Each family carries the CLI exit code it maps to."""

from typing import Any, Optional


class ModlimError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code: int = 1


# Invalid domains, quadruples and discretizations (exit 2)


class DomainError(ModlimError):
    exit_code = 2


class NotLSC(DomainError):
    def __init__(self, x: float, stored: float, left: float, right: float):
        self.x = x
        super().__init__(
            f"step value {stored} at breakpoint x={x} exceeds min of one-sided "
            f"limits ({left}, {right}); f is not lower semicontinuous"
        )


class InfiniteArea(DomainError):
    pass


class NonPositive(DomainError):
    pass


class InvalidInterval(DomainError):
    pass


class InvalidQuadruple(DomainError):
    pass


class DegenerateQuadruple(DomainError):
    pass


class DegenerateStrip(DomainError):
    pass


class UnsupportedKind(DomainError):
    pass


class SpecParseError(ModlimError):
    """A spec or config file that is not well-formed JSON (exit 1, like I/O)."""

    def __init__(self, path: str, line: int, column: int, detail: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}:{column}: {detail}")


class DomainSpecError(DomainError):
    """A domain spec file whose fields do not validate."""

    def __init__(self, path: str, detail: str):
        self.path = path
        self.detail = detail
        super().__init__(f"{path}: {detail}")


class ResolutionTooCoarse(DomainError):
    def __init__(self, feature: str, size: float, h: float):
        self.feature = feature
        self.size = size
        self.h = h
        super().__init__(f"cell size h={h} does not resolve {feature} of size {size}")


class ScheduleTooCoarse(DomainError):
    pass


# Discrete solver (exit 3)


class SolverError(ModlimError):
    exit_code = 3


class Disconnected(SolverError):
    """No source-to-sink path exists; the modulus of the family is 0."""

    value = 0.0


class IterationLimit(SolverError):
    def __init__(self, message: str, estimate: Optional[Any] = None):
        self.estimate = estimate
        super().__init__(message)


class InfeasibleEta(SolverError):
    pass


class EmptyFamily(SolverError):
    pass


# Quadrature (exit 4)


class QuadratureFailure(ModlimError):
    exit_code = 4


# Bad invocations and arguments (exit 64)


class UsageError(ModlimError):
    exit_code = 64


class OutOfRange(UsageError):
    pass


class ExtrapolationError(UsageError):
    pass


class ConfigError(UsageError):
    pass
