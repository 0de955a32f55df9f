"""Exception types shared across qsense."""


class QsenseError(Exception):
    """Base class for all qsense errors."""


class PhysicsInputError(QsenseError, ValueError):
    """Invalid physical input: negative constants, unsorted times, step too coarse."""


class NumericalError(QsenseError, RuntimeError):
    """A computation produced non-finite values or failed to converge."""


class ConfigError(QsenseError, ValueError):
    """Invalid or unreadable run configuration."""


class FormatError(QsenseError, ValueError):
    """Malformed dataset, model or record file, or incompatible file contents."""


class TrainingDiverged(NumericalError):
    """Training cost became non-finite; carries the report up to that point."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
