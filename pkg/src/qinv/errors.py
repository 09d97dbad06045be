"""Exception types raised across the package."""


class QinvError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(QinvError):
    """Operands have incompatible shapes."""


class HermiticityError(QinvError):
    """Input violates a Hermiticity precondition."""


class NormRangeError(QinvError):
    """Matrix norm outside the range where the kernel is reliable."""


class SingularMatrixError(QinvError):
    """Linear system singular to working precision."""


class DomainError(QinvError):
    """Arguments outside the mathematical domain of an operation."""


class RegimeError(QinvError):
    """Parameter regime where the construction does not exist (no real solution)."""


class BrokenRegimeError(RegimeError):
    """su(2) auxiliary condition has no real solution: |2G/(omega+Omega)| >= 1."""


class SingularConditionError(RegimeError):
    """Auxiliary condition degenerates: omega + Omega = 0 with G != 0."""


class GeneratorSpanError(QinvError):
    """Matrix not expressible as a linear combination of {1, K0, K+, K-}."""


class ConsistencyError(QinvError):
    """Two routes to the same quantity disagree beyond tolerance."""


class AccuracyError(QinvError):
    """Integrator step too large for the requested accuracy."""


class DivergenceError(QinvError):
    """State growth beyond anything a bounded-solution run can produce."""


class FrameLeakageError(QinvError):
    """Propagated state leaked out of the tracked invariant eigenstate."""


class MetricError(QinvError):
    """Metric expectation value came out significantly complex."""


class ConfigError(QinvError):
    """Run configuration missing or malformed."""

    def __init__(self, field: str, message: str):
        super().__init__(f"config field '{field}': {message}")
        self.field = field
