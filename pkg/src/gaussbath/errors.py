"""Exception hierarchy shared by all gaussbath modules."""


class GaussBathError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(GaussBathError, ValueError):
    pass


class InvalidCovariance(GaussBathError, ValueError):
    pass


class DegenerateState(GaussBathError, ValueError):
    pass


class UnsupportedConfiguration(GaussBathError, ValueError):
    pass


class NumericalFailure(GaussBathError, ArithmeticError):
    pass


class IntegrationDiverged(NumericalFailure):
    """Raised when the moment integrator produces a non-finite state."""

    def __init__(self, time, message=None):
        self.time = float(time)
        super().__init__(message or f"moment integration diverged at t={self.time!r}")


class ConfigError(GaussBathError, ValueError):
    """Invalid run configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class PhysicalityWarning(UserWarning):
    """A covariance matrix violated the uncertainty relation."""
