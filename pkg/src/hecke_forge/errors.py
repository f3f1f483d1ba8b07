"""Exception hierarchy shared by all hecke_forge modules."""


class HeckeForgeError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedType(HeckeForgeError):
    """Dynkin type or rank outside the supported desk-scale table."""


class GroupTooLarge(HeckeForgeError):
    """Weyl group enumeration exceeded the configured element cap."""


class VariableMismatch(HeckeForgeError):
    """Binary series operation on series with different variable tuples."""


class NotAUnit(HeckeForgeError):
    """Constant term is not invertible in the declared coefficient ring."""


class NotDivisible(HeckeForgeError):
    """Exact series division failed; ``degree`` is the first offending degree."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotIntegral(HeckeForgeError):
    """Quotient exists over Q but not over the declared ring.

    ``offenders`` lists (exponent, coefficient-string) pairs with
    non-integral coefficients.
    """

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


class NonNilpotentSubstitution(HeckeForgeError):
    """Substituted series has a nonzero constant term."""


class RingMismatch(HeckeForgeError):
    """Operation requires a coefficient ring property (usually Q) that fails."""


class AxiomViolation(HeckeForgeError):
    """A formal-group-law axiom failed at build time."""


class PrecisionExhausted(HeckeForgeError):
    """An operation would have to produce or compare terms at precision 0."""


class UnsupportedLocalization(HeckeForgeError):
    """Denominator outside the allowed monoid {x_a} u {x_a - x_gamma}."""


class ExpressionError(HeckeForgeError):
    """CLI expression parse or evaluation error; ``position`` points at input."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
