"""Exception hierarchy shared by all modules."""


class SpdcError(Exception):
    """Base class for library errors."""


class DomainError(SpdcError, ValueError):
    """Input outside the physical or mathematical domain of an operation."""


class GridError(SpdcError):
    """The sampling grid is too small or too coarse for the requested state."""


class UsageError(SpdcError, TypeError):
    """An operation received an object of the wrong kind (e.g. wrong domain tag)."""


class NumericalError(SpdcError, ArithmeticError):
    """A numerical routine failed or produced an invalid result."""


class PhasematchWarning(UserWarning):
    """Crystal is not phasematched at the requested frequency."""
