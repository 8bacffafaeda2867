from __future__ import annotations


class QuasiBellError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidModulusError(QuasiBellError):
    pass


class OutcomeRangeError(QuasiBellError):
    pass


class InvalidOutcomeMapError(QuasiBellError):
    pass


class InvalidDistributionError(QuasiBellError):
    pass


class DimensionMismatchError(QuasiBellError):
    pass


class DegenerateSpecError(QuasiBellError):
    """The quasi-distance is identically zero, so S_max = 0."""


class UnknownLabelError(QuasiBellError):
    pass


class BudgetExceededError(QuasiBellError):
    pass


class InvalidScenarioError(QuasiBellError):
    pass


class NonAdjacentPairError(QuasiBellError):
    pass


class VanishingDenominatorError(QuasiBellError):
    """A custom phase choice makes sin[(pi/R)(x + alpha - beta)] vanish."""


class MissingPairError(QuasiBellError):
    pass


class NoViolationError(QuasiBellError):
    """The quantum value does not violate the inequality, so v_c is undefined."""

    def __init__(self, i_q: float, i_r: float):
        super().__init__(f"no violation: I_q={i_q!r}, I_r={i_r!r}")
        self.i_q = i_q
        self.i_r = i_r
