"""Exception hierarchy for the interpolation toolkit."""


class AipError(Exception):
    """Base class for all errors raised by :mod:`aip`."""


class DimensionMismatch(AipError):
    pass


class NotHermitian(AipError):
    pass


class NotPsd(AipError):
    """Raised when a form that must be positive semidefinite is not.

    The most negative eigenvalue is kept on ``self.eigenvalue``.
    """

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotIsometric(AipError):
    pass


class IllDefined(AipError):
    pass


class NotContractive(AipError):
    pass


class SingularResolvent(AipError):
    """Raised when ``I - z A`` (or ``I - s w``) is numerically singular."""

    def __init__(self, message, point=None, eigenvalue=None):
        super().__init__(message)
        self.point = point
        self.eigenvalue = eigenvalue


class DegenerateInput(AipError):
    pass


class PreconditionError(AipError):
    pass
