"""Shared exception types."""


class CuspcountError(Exception):
    pass


class DegenerateInput(CuspcountError):
    """Vanishing discriminant where a squarefree polynomial is required."""


class HalvingError(CuspcountError):
    """Division by 2 requested in a ring where the element is not divisible."""


class NotASquare(CuspcountError):
    """Square root requested of a non-square ring element."""


class RingTooSmall(CuspcountError):
    """Interpolation needs more evaluation points than the ring has."""


class LengthMismatch(CuspcountError):
    pass


class NonUnitDiscriminant(CuspcountError):
    """Reduction over a field/local ring requires unit discriminant."""


class ZeroSliceEntry(CuspcountError):
    """Canonical forms need all slicing entries nonzero."""


class BoxTooLarge(CuspcountError):
    pass


class LevelTooDeep(CuspcountError):
    pass


class StabilizationFailure(CuspcountError):
    """Truncated orbit counts did not stabilize across consecutive levels."""


class InstanceTooLarge(CuspcountError):
    pass


class FactorizationTimeout(CuspcountError):
    pass


class InvalidParity(CuspcountError):
    """Real-root count r with the wrong parity for the degree."""
