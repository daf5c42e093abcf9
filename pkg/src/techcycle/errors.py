"""Exception types shared across the package."""


class TechCycleError(Exception):
    """Base class for all errors raised by this package."""


class TableParseError(TechCycleError):
    """A CSV cell could not be parsed; message names the row and column."""


class ValidationError(TechCycleError):
    """A record or series violates a structural invariant."""


class DuplicateRecordError(TechCycleError):
    """The same (year, format) pair appears twice in one table."""


class MissingCpiYearError(TechCycleError):
    """A deflation was requested for a year absent from the CPI table."""


class EmptyGroupError(TechCycleError):
    """A technology group matched no record in the dataset."""


class InsufficientDataError(TechCycleError):
    """Too few observations for the requested estimate."""


class DegenerateRegressorError(TechCycleError):
    """The explanatory variable has zero variance."""


class DomainError(TechCycleError):
    """An argument lies outside the mathematical domain of the operation."""


class NoCycleError(TechCycleError):
    """A revenue series has no positive value, so no lifecycle exists."""


class DegenerateCycleError(TechCycleError):
    """Cycle length is zero; wave shares are undefined."""


class NotYetDefinedError(TechCycleError):
    """A cycle quantity depends on an event that has not occurred in the data."""


class WindowError(TechCycleError):
    """A fitting window is empty or contains unusable observations."""


class ConfigError(TechCycleError):
    """A config file is malformed or inconsistent."""
