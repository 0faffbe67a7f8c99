"""Exception types shared across the package."""


class ShiftOptError(Exception):
    """Base class for all package errors."""


class ArithmeticOverflow(ShiftOptError, OverflowError):
    """An integer left the checked 64-bit range."""


class CapExceeded(ShiftOptError):
    """An enumeration or materialization would exceed its configured cap."""


class DimensionMismatch(ShiftOptError, ValueError):
    pass


class NotShifted(ShiftOptError, ValueError):
    """The cost matrix does not have the row monotonicity a solver requires."""


class OracleProtocolError(ShiftOptError):
    """A user oracle returned something outside its contract."""


class DecomposabilityViolated(ShiftOptError):
    """Greedy peeling failed, so the extension was not decomposable after all."""


class InvalidDecomposition(ShiftOptError, ValueError):
    pass


class SupportTooLarge(ShiftOptError, ValueError):
    """A constraint row touches more variables than the configured cap."""
