"""Exception taxonomy shared across modules; the CLI maps these to exit codes."""


class WeightlabError(Exception):
    """Base class for all package errors."""


class ValidationError(WeightlabError):
    """Bad configuration or arguments (exit code 2)."""


class IndexNotFound(WeightlabError):
    """No Riesz index met the norm threshold within the search bound (exit 3)."""


class NumericFailure(WeightlabError):
    """Non-finite samples or broken monotonicity in a numeric pipeline (exit 4)."""


class NonIncreasingError(NumericFailure):
    """A cumulative integral that must be strictly increasing stalled."""


class NonMonotonicError(NumericFailure):
    """Arc length stalled; the curve cannot be reparametrized."""
