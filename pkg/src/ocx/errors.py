"""Exception types raised by the library."""


class OcxError(Exception):
    """Base class for all library errors."""


class ParameterError(OcxError, ValueError):
    """An argument is outside its admissible range."""


class ShapeError(OcxError, ValueError):
    """Array dimensions do not agree."""


class DomainError(OcxError, ValueError):
    """A function was evaluated outside its domain."""


class DegenerateBandwidthError(OcxError, ValueError):
    """The bandwidth heuristic produced a zero bandwidth."""


class SingularPointError(OcxError, ValueError):
    """The gradient is undefined at the requested point."""


class UndefinedAUCError(OcxError, ValueError):
    """A flip curve starting at zero has no normalized area."""


class ConvergenceError(OcxError, RuntimeError):
    """The dual solver hit its iteration budget.

    The best iterate found so far is available as ``model``.
    """

    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model
