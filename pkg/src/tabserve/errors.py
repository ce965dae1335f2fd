"""Exception hierarchy shared across the package."""


class TabserveError(Exception):
    """Base class for all package errors."""


class InvalidInputError(TabserveError):
    """Caller-supplied data is unusable (non-finite values, width mismatch, empty input)."""


class ConfigurationError(TabserveError):
    """A config object or config file is internally inconsistent."""


class TrainingError(TabserveError):
    """Training cannot proceed (degenerate data); message carries the diagnostic."""


class ModelFormatError(TabserveError):
    """Base class for model deserialization failures."""


class FormatVersionError(ModelFormatError):
    """Stream declares a format version this build cannot read."""


class TruncatedStreamError(ModelFormatError):
    """Stream ended before the declared payload was complete."""


class ChecksumError(ModelFormatError):
    """Payload bytes do not match the trailing checksum."""


class QueueFullError(TabserveError):
    """Request queue is at capacity; the request was rejected, not accepted."""


class DecryptionError(TabserveError):
    """Authenticated decryption failed; no plaintext is released."""
