"""Exception types shared across rsforge."""


class RSForgeError(Exception):
    exit_code = 1


class ParameterError(RSForgeError, ValueError):
    """Inconsistent or out-of-range parameters."""

    exit_code = 2


class ResourceError(RSForgeError):
    """An enumeration would exceed the configured cap."""

    exit_code = 3


class ContractError(RSForgeError):
    """An input violates a structural precondition (asymmetric set, layer conflict)."""

    exit_code = 4
