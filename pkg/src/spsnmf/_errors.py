"""Exception and warning types raised across the package."""


class SpsnmfError(Exception):
    """Base class for all errors raised by spsnmf."""


class ShapeMismatch(SpsnmfError, ValueError):
    pass


class InvalidK(SpsnmfError, ValueError):
    pass


class InvalidFraction(SpsnmfError, ValueError):
    pass


class InvalidLambdaPair(SpsnmfError, ValueError):
    pass


class LengthMismatch(SpsnmfError, ValueError):
    pass


class IndexOutOfRange(SpsnmfError, IndexError):
    pass


class DatasetError(SpsnmfError):
    """Problem reading a dataset file."""


class ParseError(DatasetError, ValueError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class MissingLabelColumn(DatasetError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing label column"


class NonConvergenceWarning(RuntimeWarning):
    """An iterative routine hit its iteration cap before reaching tolerance."""
