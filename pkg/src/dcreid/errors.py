"""Exception types raised across the pipeline."""


class ReidError(Exception):
    """Base class for domain errors (mapped to CLI exit status 1)."""


class DecodeError(ReidError):
    """Malformed or truncated raster data."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class IncompatibleSignatureError(ReidError):
    """Two signatures were extracted with different parameters."""


class EvaluationError(ReidError):
    pass


class IngestionError(ReidError):
    pass


class SignatureFormatError(ReidError):
    pass
