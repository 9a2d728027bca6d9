"""Exception types raised by the library."""


class EntropyError(Exception):
    """Base class for all library errors."""


class ParameterError(EntropyError, ValueError):
    """Invalid (c, n) family parameters."""


class NonPositiveN(ParameterError):
    pass


class NLeqC(ParameterError):
    pass


class NonIntegerL(ParameterError):
    pass


class DomainViolation(EntropyError, ValueError):
    """Argument outside the family domain (or its interior, for derivatives)."""


class MaxTermsExceeded(EntropyError, RuntimeError):
    """A series tail bound could not be certified within the term cap."""


class DegenerateLog(EntropyError, ArithmeticError):
    """The certified interval of a sum of squares touches zero."""


class OrderTooHigh(EntropyError, ValueError):
    pass


class StencilOutsideDomain(EntropyError, ValueError):
    pass


class GridTooCoarse(EntropyError, ValueError):
    pass


class ToleranceNotReached(EntropyError, RuntimeError):
    """Adaptive quadrature ran out of subdivisions."""
