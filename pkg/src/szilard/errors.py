"""Exception hierarchy for the simulator."""


class SzilardError(Exception):
    """Base class for all simulator errors."""


class DomainError(SzilardError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConvergenceError(SzilardError, RuntimeError):
    """A root finder or optimizer failed; the message carries the bracket."""


class TruncationError(SzilardError, RuntimeError):
    """The spectrum cutoff could not be certified below the hard cap."""


class ProtocolError(SzilardError, RuntimeError):
    """The forward and time-reversed protocols are inconsistent (p_m > 0, p*_m = 0)."""


class ConfigError(SzilardError, ValueError):
    """Invalid or conflicting run configuration."""
