"""Exception hierarchy. CLI exit codes are attached to each class."""


class SpeedupLabError(Exception):
    exit_code = 1


class InputError(SpeedupLabError, ValueError):
    exit_code = 2


class DomainError(InputError):
    pass


class DataError(InputError):
    pass


class ConfigError(InputError):
    pass


class RunLookupError(InputError, LookupError):
    pass


class CapacityError(SpeedupLabError):
    exit_code = 3

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size


class ConvergenceError(SpeedupLabError):
    """Raised when an iterative method hits its iteration cap.

    ``best`` holds the last iterate (or estimate) and ``residual`` the
    residual it achieved, so callers can still inspect partial results.
    """

    exit_code = 4

    def __init__(self, message, best=None, residual=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations
