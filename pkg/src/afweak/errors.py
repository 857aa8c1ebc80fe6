"""Exception types shared across the package."""


class AfweakError(Exception):
    """Base class for all domain errors raised by this package."""


class NotARoot(AfweakError):
    """The index pair does not name a positive root of the given system."""


class DependentRoots(AfweakError):
    """Two roots that were required to be linearly independent are not."""


class InvalidWindow(AfweakError):
    """A window fails the defining conditions of its permutation group."""


class ParityViolation(InvalidWindow):
    """A window defines a signed permutation outside the B/D subgroup.

    The message names which parity count is odd.
    """


class TypeMismatch(AfweakError):
    """Operands belong to different affine types."""


class TooLarge(AfweakError):
    """An exhaustive enumeration was requested beyond its guarded size."""


class ComponentMismatch(AfweakError):
    """Triple data refers to a component absent from the decomposition."""


class UnpairedPhiPrime(AfweakError):
    """A signed-type block selection violates the +/- pairing constraint."""


class NotBiclosed(AfweakError):
    """The input set is not biclosed; carries a rank-2 witness if known."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnstableWindow(AfweakError):
    """The height cutoff is too small to certify the computation."""


class UnstableCutoff(UnstableWindow):
    """b_infinity did not stabilize below the cutoff."""


class OutOfDomain(AfweakError):
    """An integer outside the order's ground set was compared."""


class DRepresentationRequired(AfweakError):
    """The triple has no single-total-order model; use a DTwist."""


class InvalidTwist(AfweakError):
    """The DTwist data does not match its base order."""


class NotAnOrder(AfweakError):
    """A threshold relation failed the total-order invariants."""


class SigmaFixednessViolated(AfweakError):
    """A join of sigma-fixed elements was not sigma-fixed (bug trap)."""
