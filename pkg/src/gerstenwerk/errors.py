"""Error types shared by the library and mapped to CLI exit codes."""


class GerstenwerkError(Exception):
    exit_code = 1


class ValidationError(GerstenwerkError, ValueError):
    """Malformed input or a violated precondition."""

    exit_code = 2


class TruncationError(GerstenwerkError):
    """A computation needed degrees beyond the truncation window."""

    exit_code = 3

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class VerificationError(GerstenwerkError):
    """A chain-level identity that should hold was found to fail."""

    exit_code = 4
