"""Exception hierarchy shared by all epiarima modules.

Three failure families matter to callers (and map onto CLI exit codes):
input/contract validation, optimizer convergence, and data integrity of
ingested files.
"""


class EpiArimaError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(EpiArimaError, ValueError):
    """An argument or precondition violation (CLI exit code 2)."""


class InsufficientDataError(ValidationError):
    """Series too short for the requested operation."""


class DegenerateSeriesError(ValidationError):
    """Zero-variance (or otherwise degenerate) input where variation is required."""


class HorizonError(ValidationError):
    """Requested forecast horizon is unreasonably long for the fitted sample."""


class ConvergenceError(EpiArimaError):
    """Optimizer failed to converge after bounded restarts (CLI exit code 3).

    Carries the best model found so far in ``best`` when one exists.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class SearchFailureError(EpiArimaError):
    """Every candidate in an order search failed to fit.

    ``causes`` maps each attempted order to the reason its fit failed.
    """

    def __init__(self, message: str, causes=None):
        super().__init__(message)
        self.causes = dict(causes or {})


class DataIntegrityError(EpiArimaError):
    """Ingested data violates the daily-series contract (CLI exit code 4)."""


class CsvParseError(DataIntegrityError):
    """A CSV row could not be parsed; ``line`` is the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line
