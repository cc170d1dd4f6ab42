"""Exception hierarchy.

Input errors mean the caller asked for something outside the supported
family of knots; internal errors mean a structural invariant of the
construction failed, so any output produced alongside them is untrustworthy.
"""


class TwistGridError(Exception):
    """Base class for all package-specific errors."""


class InputError(TwistGridError, ValueError):
    """Unsupported or malformed input parameters (CLI exit code 2)."""


class ZeroDenominator(InputError):
    """A continued fraction hits a zero denominator partway through."""


class EvenP(InputError):
    """p is even: the branch set is a two-component link, not a knot."""


class UnitP(InputError):
    """p = 1 (or 0): the cover is S^3 (or S^2 x S^1); the diagram degenerates."""


class NotCoprime(InputError):
    """gcd(p, q) != 1, so (p, q) does not describe a lens space."""


class InternalCheckFailed(TwistGridError):
    """A structural self-check failed (CLI exit code 3)."""


class TraceBroken(InternalCheckFailed):
    """The basepoint-connecting walk does not close into a single
    alternating 4-arc loop."""


class UnexpectedPeriodicDomain(InternalCheckFailed):
    """The lattice of null-boundary domains is not spanned by the
    all-ones vector."""


class NotDivisible(InternalCheckFailed):
    """The signed generator generating function is not divisible by
    (1 - T^-1)."""


class NoSymmetricShift(InternalCheckFailed):
    """No integer exponent shift makes the Alexander quotient symmetric."""


class DSquaredNonzero(InternalCheckFailed):
    """A boundary operator fails to square to zero."""


class NotDivisibleByV(InternalCheckFailed):
    """A sector's homology polynomial is not divisible by the two-element
    bigraded factor at (0,0) and (-1,-1)."""


class EmptyHomology(InternalCheckFailed):
    """A sector's surviving homology does not have the expected rank-two
    tower."""


class MismatchAgainstParallelograms(InternalCheckFailed):
    """The brute-force domain classification disagrees with the
    parallelogram enumeration."""


class DifferentSectors(TwistGridError):
    """A relative grading was requested between generators in different
    spin-c sectors."""
