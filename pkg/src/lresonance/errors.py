"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LabError, ValueError):
    """An argument is out of range or inconsistent with another argument."""


class DomainError(LabError, ValueError):
    """An input lies outside the domain of the mathematical object."""


class PoleError(LabError, ZeroDivisionError):
    """Evaluation requested at a pole."""


class CapacityError(LabError, MemoryError):
    """A request exceeds a table bound or a configured capacity guard."""


class CoverageError(LabError, KeyError):
    """A required input record is missing."""


class DegenerateError(LabError, ArithmeticError):
    """A quantity needed as a divisor vanishes or has the wrong sign."""
