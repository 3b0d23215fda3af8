"""Exception hierarchy shared across the package."""


class KakQKDError(Exception):
    """Base class for all package errors."""


class InvalidArgument(KakQKDError, ValueError):
    """An argument violates an operation's precondition."""


class AmbiguousState(KakQKDError):
    """A state matches neither member of the message basis."""

    def __init__(self, fidelity0, fidelity1):
        super().__init__(
            f"state matches neither basis state (fidelities {fidelity0:.6g}, {fidelity1:.6g})"
        )
        self.fidelity0 = fidelity0
        self.fidelity1 = fidelity1


class CustodyError(KakQKDError):
    """A flight qubit was read twice or duplicated."""


class ProtocolAbort(KakQKDError):
    """A protocol run was aborted; ``index`` is set for sequence runs."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"bit {index}: {message}"
        super().__init__(message)
        self.index = index


class ConfigError(KakQKDError):
    """Bad experiment configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
