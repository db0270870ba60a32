"""
Exceptions raised by kakeya_lab.

Every error derives from :class:`KakeyaLabError` and from the closest
builtin exception, so callers may catch either.
"""

# License: BSD Style, 3 clauses.


class KakeyaLabError(Exception):
    """Base class for all kakeya_lab errors."""


class LabWarning(UserWarning):
    """Warning for recoverable oddities: clamped inputs, flagged fallbacks."""


###############################################################################
# Arithmetic

class NonPrime(KakeyaLabError, ValueError):
    """The characteristic given for a field is not a prime."""


class ReducibleModulus(KakeyaLabError, ValueError):
    """The modulus of an extension field is not irreducible over F_p."""


class DivisionByZero(KakeyaLabError, ZeroDivisionError):
    """Division by the zero element of a field."""


class NonUnitDivisor(KakeyaLabError, ZeroDivisionError):
    """Division by a non-unit of a finite ring."""


class DimensionMismatch(KakeyaLabError, ValueError):
    """A point or matrix does not have the expected number of coordinates."""


class ZeroPolynomial(KakeyaLabError, ValueError):
    """An operation that requires a nonzero polynomial got the zero one."""


class NotHomogeneous(KakeyaLabError, ValueError):
    """A polynomial required to be homogeneous is not."""


class UnsupportedRing(KakeyaLabError, ValueError):
    """The ring kind does not support the requested construction."""


###############################################################################
# Sizes and caps

class EnumerationTooLarge(KakeyaLabError, ValueError):
    """An enumeration would exceed the configured element cap."""


class MatrixTooLarge(KakeyaLabError, ValueError):
    """A constraint matrix would exceed the configured entry cap."""


class DegreeTooLarge(KakeyaLabError, ValueError):
    """A polynomial construction would exceed the degree cap."""


###############################################################################
# Geometry and operators

class InvalidDeclaration(KakeyaLabError, ValueError):
    """Declared metadata of a variety contradicts its point count."""


class CurveContained(KakeyaLabError, ValueError):
    """A curve lies inside the hypersurface it should be intersected with."""


class AnchorMissing(KakeyaLabError, ValueError):
    """A curve of an anchored family does not pass through its anchor."""


class ContainmentViolation(KakeyaLabError, ValueError):
    """A curve of a family lies in the ambient algebraic set."""


class DegenerateDirection(KakeyaLabError, ValueError):
    """A ring direction lies in the maximal ideal."""


class BadExponent(KakeyaLabError, ValueError):
    """A norm exponent is below 1."""


class ExponentOutOfRange(KakeyaLabError, ValueError):
    """Exponents outside the admissible region of an estimate."""


class ZeroFunction(KakeyaLabError, ValueError):
    """A ratio or scale is undefined because the function vanishes."""


class IntersectionTooSmall(KakeyaLabError, ValueError):
    """A curve meets the set in fewer points than required."""


class EvenCharacteristic(KakeyaLabError, ValueError):
    """A construction requires odd characteristic."""


class BadParameters(KakeyaLabError, ValueError):
    """Parameters outside the documented range."""


class NotKakeya(KakeyaLabError, ValueError):
    """A set claimed to be Kakeya misses a direction."""


class EmptySet(KakeyaLabError, ValueError):
    """An operation that requires a nonempty set got an empty one."""


class InternalCheckFailure(KakeyaLabError, AssertionError):
    """An independent re-verification disagreed with a computed result."""
