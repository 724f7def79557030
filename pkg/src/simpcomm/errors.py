"""Exception hierarchy. Every math-domain failure carries a stable name used in CLI reports."""


class MathDomainError(Exception):
    """Base for errors that are about the mathematics, not the input syntax."""

    @property
    def name(self) -> str:
        return type(self).__name__


class ParseError(ValueError):
    pass


class NonFieldCoefficients(MathDomainError):
    pass


class VariableMismatch(MathDomainError):
    pass


class UnsupportedBase(MathDomainError):
    pass


class ShapeMismatch(MathDomainError):
    pass


class NegativeDegrees(MathDomainError):
    pass


class TruncationTooDeep(MathDomainError):
    pass


class NonComputableBase(MathDomainError):
    pass


class UnsupportedProduct(MathDomainError):
    pass


class InfiniteUnderlyingSet(MathDomainError):
    pass


class CombinatorialBlowup(MathDomainError):
    pass


class TruncationExceeded(MathDomainError):
    pass


class NotTorIndependent(MathDomainError):
    pass


class InfiniteClassGroup(MathDomainError):
    pass


class NotSquareZero(MathDomainError):
    pass


class ScaleCap(MathDomainError):
    pass


class BadParameters(MathDomainError):
    pass


class BadCharacteristic(MathDomainError):
    pass


class SimplicialIdentityError(MathDomainError):
    pass


class NotAComplex(MathDomainError):
    pass
