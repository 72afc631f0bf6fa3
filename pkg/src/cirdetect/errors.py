"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input vs bug" can catch one class.
"""


class CirError(ValueError):
    """Base class for all diagnosable errors raised by this package."""


class DomainError(CirError):
    """A mathematical precondition is violated (e.g. a diverging moment)."""


class DegeneratePathError(CirError):
    """The path carries no usable information (e.g. identically zero)."""


class SingularWindowError(CirError):
    """The design matrix of an estimation window is (near-)singular.

    Carries the offending determinant so callers can report conditioning.
    """

    def __init__(self, message: str, det_q: float):
        super().__init__(message)
        self.det_q = det_q


class MatrixDomainError(CirError):
    """A matrix argument is outside its required class (not SPD, asymmetric)."""


class PathCsvError(CirError):
    """Base class for path CSV parsing problems."""


class MalformedRowError(PathCsvError):
    """A CSV row does not parse as two floats (or the header is wrong)."""


class NonUniformGridError(PathCsvError):
    """The time column of a path CSV is not an equally spaced grid."""


class NegativeValueError(PathCsvError):
    """A path CSV contains a negative state value."""
