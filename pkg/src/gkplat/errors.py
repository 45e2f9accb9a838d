"""Exception types shared across the package.

The CLI maps these onto exit codes: ParseError -> 2, NotConverged /
TailNotConverged -> 3, everything else -> 2.
"""


class GkplatError(Exception):
    """Base class for all package errors."""


class NotUnimodular(GkplatError):
    pass


class NotIntegral(GkplatError):
    pass


class NotFullRank(GkplatError):
    pass


class Degenerate(GkplatError):
    pass


class Singular(GkplatError):
    pass


class NotSymplectic(GkplatError):
    pass


class NotInLattice(GkplatError):
    pass


class NotInDual(GkplatError):
    pass


class UnknownName(GkplatError):
    pass


class NotSelfOrthogonal(GkplatError):
    pass


class InvalidGlue(GkplatError):
    pass


class TooLarge(GkplatError):
    pass


class DimensionTooLarge(GkplatError):
    pass


class NotInvertible(GkplatError):
    pass


class SamplingExhausted(GkplatError):
    pass


class UnsupportedModulus(GkplatError):
    pass


class DecryptionFailure(GkplatError):
    pass


class NoTrivialSublattice(GkplatError):
    pass


class TailNotConverged(GkplatError):
    pass


class BadIndex(GkplatError):
    pass


class NotSymplecticModD(GkplatError):
    pass


class NotPrime(GkplatError):
    pass


class NotHyperbolic(GkplatError):
    pass


class NotPositiveConjugate(GkplatError):
    pass


class QTooLarge(GkplatError):
    pass


class NotConverged(GkplatError):
    pass


class ParseError(GkplatError):
    pass
