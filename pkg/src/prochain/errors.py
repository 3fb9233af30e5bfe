"""Exception types shared across the package."""


class ProchainError(Exception):
    pass


class RingMismatch(ProchainError):
    """Operands live over different coefficient rings."""


class ContainmentViolation(ProchainError):
    """A subgroup that was required to contain another does not."""


class ExactnessViolation(ProchainError):
    """An exact-couple or long-exact-sequence invariant failed."""


class WindowViolation(ProchainError):
    """A homology-window certificate required by an operation failed."""


class PreconditionViolated(ProchainError):
    """An operation was called on inputs outside its contract."""


class ParseError(ProchainError):
    """Workspace file could not be parsed; message carries the location."""


class ValidationError(ProchainError):
    """Workspace object failed validation; message names object and degree."""
