"""Exception hierarchy for the package."""


class CollarGeoError(Exception):
    """Base class for all package errors."""


class DomainError(CollarGeoError, ValueError):
    """Arguments outside the mathematically admissible range."""


class IntegrationError(CollarGeoError, RuntimeError):
    """The ODE integrator failed (step underflow or invalid density)."""


class ConvergenceError(CollarGeoError, RuntimeError):
    """An iterative solver failed to bracket or converge."""


class ConfigError(CollarGeoError, ValueError):
    """Invalid suite configuration.

    ``location`` is a human-readable pointer (key path or line number) into
    the offending config text.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
