"""Exception hierarchy shared by every module of the package."""


class JacboundError(Exception):
    """Base class for all errors raised by jacbound."""


class ParamError(JacboundError, ValueError):
    """Parameters violate an operation's precondition."""


class DomainError(JacboundError, ValueError):
    """A formula is evaluated outside its domain of definition."""


class UnsupportedCase(JacboundError, ValueError):
    """The requested case has no formula (e.g. n = 2 outside the exceptional table)."""


class UnsupportedField(UnsupportedCase):
    """No critical-exponent gap is known for this field dimension."""


class DivisionByIntervalContainingZero(JacboundError, ZeroDivisionError):
    pass


class NegativeRadicand(DomainError):
    pass


class NegativeBaseFractionalExponent(DomainError):
    pass


class ZeroToNegativePower(DomainError, ZeroDivisionError):
    pass


class PoleError(DomainError, ZeroDivisionError):
    """A denominator factor of the objective vanishes."""


class DegenerateCase(JacboundError, ValueError):
    pass


class NoSignChange(JacboundError, ValueError):
    pass


class BudgetExceeded(JacboundError, ValueError):
    """A brute-force enumeration would exceed its combinatorial budget."""


class ShapeMismatch(JacboundError, ValueError):
    pass


class NotPSD(JacboundError, ValueError):
    pass


class NotFoundWithinCap(JacboundError, RuntimeError):
    pass


class CertificationInconclusive(JacboundError, RuntimeError):
    """Interval refinement hit the maximum precision without deciding a comparison."""
