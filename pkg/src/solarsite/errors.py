"""Exception hierarchy shared across the package.

Each class carries the process exit code the CLI maps it to, so library
code never needs to know about the CLI and vice versa.
"""


class SolarSiteError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


class ConfigError(SolarSiteError):
    """Missing or inconsistent configuration (files, keys, table entries)."""

    exit_code = 2


class ValidationError(SolarSiteError):
    """Input data violates a schema or a domain invariant."""

    exit_code = 3


class ParseError(ValidationError):
    """A file could not be parsed; message names the offending row."""


class DomainError(SolarSiteError):
    """An operation was called with arguments outside its domain."""

    exit_code = 3


class InfeasibleError(SolarSiteError):
    """A target cannot be met from the available supply."""

    exit_code = 4

    def __init__(self, message: str, *, region: str | None = None,
                 shortfall_mw: float | None = None, stage: str | None = None):
        super().__init__(message, stage=stage)
        self.region = region
        self.shortfall_mw = shortfall_mw
