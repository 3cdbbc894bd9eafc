"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3.
"""


class FidshareError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FidshareError):
    """Invalid configuration value, flag combination, or config file."""


class DataError(FidshareError):
    """Malformed or inconsistent input data (files, CSV rows, trajectories)."""
