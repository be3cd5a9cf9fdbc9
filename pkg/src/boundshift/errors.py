"""Exception tree shared across the package, mapped onto CLI exit codes."""


class BoundShiftError(Exception):
    """Base class for all package-raised errors."""

    exit_code = 1


class ValidationError(BoundShiftError):
    """Invalid input data, parameters, or file contents."""

    exit_code = 2


class PgmFormatError(ValidationError):
    """Malformed PGM stream; carries the byte offset of the offending data."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class CapacityError(BoundShiftError):
    """Payload plus side information exceeds the embeddable capacity."""

    exit_code = 3

    def __init__(self, message, deficit_bits=None):
        super().__init__(message)
        self.deficit_bits = deficit_bits


class CorruptionError(BoundShiftError):
    """A marked image, map container, or bitstream failed an integrity check."""

    exit_code = 4
