"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A parameter combination is degenerate or internally inconsistent."""


class FitError(RuntimeError):
    """The upper-envelope fit cannot be performed on the given dataset."""
