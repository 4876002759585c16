"""Exception hierarchy shared by all errscope modules."""


class ErrscopeError(ValueError):
    """Base class for all errors raised by errscope."""


class MalformedHeader(ErrscopeError):
    """CSV header is missing required columns or has no model columns."""


class LengthMismatch(ErrscopeError):
    """Row or vector lengths disagree."""


class NonNumeric(ErrscopeError):
    """A cell could not be parsed as a number."""


class NonFinite(ErrscopeError):
    """A value is NaN or infinite."""


class DuplicateModelName(ErrscopeError):
    """Two model columns share the same name."""


class UnknownModel(ErrscopeError):
    """A referenced model name is not present in the prediction set."""


class ConstantTarget(ErrscopeError):
    """R-squared is undefined: the target has zero total sum of squares."""


class DegenerateDistribution(ErrscopeError):
    """Too few or fully coincident points for the requested estimate."""


class NonPositiveDefinite(ErrscopeError):
    """Matrix supplied where a symmetric positive-definite one is required."""


class MissingLayerInput(ErrscopeError):
    """A figure layer was requested without the data it needs."""
