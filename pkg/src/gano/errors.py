"""Exception types shared across the package."""


class GanoError(Exception):
    """Base class for all package errors."""


class InvalidInputError(GanoError, ValueError):
    """A value-level precondition was violated (non-finite data, bad shapes)."""


class ConfigurationError(GanoError, ValueError):
    """A structural precondition was violated (mode counts, schedules, specs)."""


class DegenerateInputError(GanoError, ValueError):
    """Statistics requested on degenerate data (zero variance, point mass)."""


class TrainingDivergedError(GanoError, RuntimeError):
    """Training produced a non-finite loss; carries the last good checkpoint."""

    def __init__(self, message: str, checkpoint_path=None):
        super().__init__(message)
        self.checkpoint_path = checkpoint_path


class FieldFileError(GanoError, ValueError):
    """Base class for binary field-file format errors."""


class BadMagicError(FieldFileError):
    """File does not start with the expected magic bytes."""


class TruncatedPayloadError(FieldFileError):
    """Payload shorter than the header-declared sample block."""


class ShapeOverflowError(FieldFileError):
    """Header declares an implausibly large tensor."""
