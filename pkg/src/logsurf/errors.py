"""Exception hierarchy shared by all modules."""


class LogSurfError(Exception):
    pass


class DomainError(LogSurfError, ValueError):
    """Argument outside the domain of the function (branch cut, zero modulus, ...)."""


class PoleError(DomainError):
    pass


class ParameterError(LogSurfError, ValueError):
    pass


class PreconditionError(LogSurfError, ValueError):
    pass


class ConvergenceError(LogSurfError, ArithmeticError):
    pass


class QuadratureError(ConvergenceError):
    pass


class BracketError(ConvergenceError):
    """A level-curve corrector could not bracket the target value."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class WindowExitError(BracketError):
    """A traced curve left the window it was confined to."""
