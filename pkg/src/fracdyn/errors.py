"""Exception hierarchy.

Every error class carries an ``exit_code`` used by the CLI:
2 = domain/validation, 3 = numerical failure, 4 = assumption violated,
5 = ambiguous lattice snap.
"""

from __future__ import annotations


class FracdynError(Exception):
    exit_code = 3


class ValidationError(FracdynError):
    exit_code = 2


class PolynomialSyntaxError(ValidationError):
    """Malformed polynomial text; ``offset`` is the byte offset of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownVariableError(ValidationError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown variable {name!r} (offset {offset}); only x, y allowed")
        self.name = name
        self.offset = offset


class DomainError(ValidationError):
    pass


class NotAccumulatingError(DomainError):
    """Spiral parameters for which the origin is not an accumulation point."""


class NotContactError(ValidationError):
    """Contact point is not nilpotent (f_y vanishes)."""


class NotHopfError(ValidationError):
    """A slow-fast Hopf condition failed; ``condition`` names it."""

    def __init__(self, condition: str, value: float):
        super().__init__(f"not a slow-fast Hopf point: {condition} (value {value:.3e})")
        self.condition = condition
        self.value = value


class NumericalError(FracdynError):
    exit_code = 3


class StepUnderflowError(NumericalError):
    def __init__(self, t: float, state):
        super().__init__(f"integrator step collapsed below 1e-15 at t={t!r}")
        self.t = t
        self.state = state


class BudgetExceededError(NumericalError):
    pass


class AccuracyError(NumericalError):
    pass


class NotSpiralingError(NumericalError):
    pass


class NoCrossingsError(NumericalError):
    pass


class BlowUpError(NumericalError):
    pass


class NoBranchError(NumericalError):
    pass


class FoldResolutionError(NumericalError):
    pass


class NoFiberError(NumericalError):
    pass


class SlowSingularityError(NumericalError):
    pass


class QuadratureFailureError(NumericalError):
    pass


class NoBalancedLevelError(NumericalError):
    pass


class MultipleRootsError(NumericalError):
    pass


class BracketFailureError(NumericalError):
    pass


class TruncatedSequenceError(NumericalError):
    def __init__(self, count: int, message: str = ""):
        super().__init__(message or f"sequence truncated at {count} terms (< 16 usable)")
        self.count = count


class InsufficientScalesError(NumericalError):
    pass


class DegenerateSequenceError(NumericalError):
    pass


class UnderResolvedError(NumericalError):
    pass


class RasterBudgetError(NumericalError):
    pass


class AssumptionViolatedError(FracdynError):
    """Slow-divergence-integral sign assumption failed on the sampled window."""

    exit_code = 4

    def __init__(self, y_where: float, message: str = ""):
        super().__init__(message or f"tilde-I changes sign or vanishes near y={y_where!r}")
        self.y_where = y_where


class AmbiguousSnapError(FracdynError):
    exit_code = 5
