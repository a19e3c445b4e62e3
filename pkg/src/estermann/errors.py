"""Exception hierarchy shared by all modules."""


class EstermannError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EstermannError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateInputError(DomainError):
    """Input that makes a formula degenerate (e.g. a zero shift)."""


class RangeError(EstermannError, OverflowError):
    """Intermediate value exceeds the supported integer width."""


class ResourceError(EstermannError, MemoryError):
    """Request exceeds the configured memory/size budget."""


class StateError(EstermannError, RuntimeError):
    """Operation needs data that has not been prepared (e.g. an unsieved window)."""


class AccuracyError(EstermannError, ArithmeticError):
    """A numerical routine could not reach the requested tolerance."""
