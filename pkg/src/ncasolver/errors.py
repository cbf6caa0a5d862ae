"""Exception hierarchy shared by the solver modules."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SolverError):
    """Array shape or length incompatible with the requested operation."""


class ModelError(SolverError):
    """Invalid physical model data (negative rate, non-Hermitian Hamiltonian, ...)."""


class DomainError(SolverError):
    """Argument outside the mathematical domain of an operation."""


class GridError(SolverError):
    """Time argument not representable on the sampling grid."""


class ParseError(SolverError):
    """Malformed or missing input file."""

    def __init__(self, message, path=None, line=None):
        self.path = str(path) if path is not None else None
        self.line = line
        detail = message
        if path is not None:
            detail = f"{path}: {detail}"
        if line is not None:
            detail = f"{detail} (line {line})"
        super().__init__(detail)


class StateError(SolverError):
    """Operation applied to an object that is not in a usable state."""


class DivergenceError(SolverError):
    """Numerical blow-up during time stepping."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"propagator diverged at step {step}")


class NumericsError(SolverError):
    """A dense linear-algebra kernel failed to converge."""


class ConfigError(SolverError):
    """Invalid run configuration; carries the offending field name."""

    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")
