"""Exception hierarchy shared by every stage of the toolkit."""


class ArimaKitError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for this failure."""

    exit_code = 3


class DegenerateInput(ArimaKitError, ValueError):
    pass


class UnsupportedSampleSize(ArimaKitError, ValueError):
    pass


class NonStationaryParams(ArimaKitError, ValueError):
    pass


class MissingMean(ArimaKitError, ValueError):
    pass


class ConvergenceFailure(ArimaKitError, RuntimeError):
    """Optimizer hit its iteration cap. ``best`` holds the best model found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SelectionFailure(ArimaKitError, RuntimeError):
    pass


class SchemaError(ArimaKitError, ValueError):
    exit_code = 2


class GapError(ArimaKitError, ValueError):
    exit_code = 2

    def __init__(self, message, years=()):
        super().__init__(message)
        self.years = tuple(years)


class ParseError(ArimaKitError, ValueError):
    exit_code = 2

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class IoError(ArimaKitError, OSError):
    exit_code = 4
