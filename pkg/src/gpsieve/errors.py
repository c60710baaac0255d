"""Exception types shared across the package."""


class GpSieveError(Exception):
    """Base class for all package errors."""


class InputError(GpSieveError):
    """Malformed or out-of-domain input data."""


class ConfigError(GpSieveError):
    """Invalid configuration value or file."""


class NumericalError(GpSieveError):
    """A factorization or solve degenerated beyond recoverable round-off."""
