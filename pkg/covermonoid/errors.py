class CoverMonoidError(Exception):
    """Base class for every error raised by the engine."""


class GroupError(CoverMonoidError, ValueError):
    pass


class LatticeError(CoverMonoidError):
    pass


class RayError(CoverMonoidError, ValueError):
    pass


class AlgebraError(CoverMonoidError, ValueError):
    pass


class TwoDegreeError(CoverMonoidError, ValueError):
    pass


class FanError(CoverMonoidError, ValueError):
    pass


class InvariantViolation(CoverMonoidError, AssertionError):
    """An internal consistency check failed; this is a bug, not bad input."""


class CommandError(CoverMonoidError):
    """
    Raised by command handlers, carries the exit status for the CLI.
    """
    def __init__(self, status_code: int, detail: str):
        super().__init__(detail)
        self.status_code = status_code
        self.detail = detail
