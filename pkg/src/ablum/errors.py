"""Exception types shared across the model."""


class ConfigurationError(ValueError):
    """Raised for invalid parameters, config keys, or config values."""


class InvalidTransitionError(ValueError):
    """Raised when a transition is evaluated between identical intensities."""


class UndefinedFractionError(ValueError):
    """Raised when a neighbourhood fraction is requested for an isolated cell."""


class DegenerateVarianceError(ValueError):
    """Raised when sensitivity indices are requested for constant outputs."""
