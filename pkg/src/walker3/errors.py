"""Exception hierarchy shared by every module."""


class WalkerError(Exception):
    """Base class for all errors raised by walker3."""


class ParseError(WalkerError, ValueError):
    pass


class DomainError(WalkerError, ValueError):
    """A primitive is undefined at the requested point."""


class OrderError(WalkerError, ValueError):
    """The requested derivative order exceeds the available jet order."""


class ZeroCurvatureError(WalkerError, ValueError):
    pass


class SignError(WalkerError, ValueError):
    """f_yy (or f_yyy) has the wrong sign for the requested construction."""


class DivisionError(WalkerError, ZeroDivisionError):
    pass


class NotNormalizedError(WalkerError, ValueError):
    pass


class UnclassifiedError(WalkerError, ValueError):
    pass


class ODESolveError(WalkerError, RuntimeError):
    pass


class BuildError(WalkerError, RuntimeError):
    pass


class InconsistencyError(WalkerError, ValueError):
    pass
