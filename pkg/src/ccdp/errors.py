"""Exception types raised by the ccdp package.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch a single class; the CLI maps them to exit code 2.
"""


class CcdpError(ValueError):
    """Base class for all package errors."""


class DimensionError(CcdpError):
    """Empty or mismatched dimensions (M = 0, empty fading vector, shape mismatch)."""


class ParameterRangeError(CcdpError):
    """A scalar parameter lies outside its admissible range."""


class FeasibilityError(CcdpError):
    """Correlation outside the range where the equi-correlated covariance is PSD."""


class RegimeError(CcdpError):
    """A formula was requested outside the parameter regime it is defined for."""


class SingularCovarianceError(CcdpError):
    """A covariance (or conditional covariance) is singular where a density is needed."""


class DegenerateStateError(CcdpError):
    """A state with zero variance cannot be normalised."""


class FactorizationError(CcdpError):
    """A covariance has eigenvalues too negative to be treated as PSD."""


class ConditionViolation(CcdpError):
    """A specification fails a regime condition (e.g. strong fading)."""

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or f"condition violated: {condition}")
