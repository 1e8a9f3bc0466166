"""Exception types shared across the package."""


class ApisiftError(Exception):
    """Base class for all recoverable errors raised by this package."""

    exit_code = 3  # data error by default


class ParseError(ApisiftError):
    """Malformed or unsupported input syntax."""

    def __init__(self, message, line=None, col=None, path=None):
        self.line = line
        self.col = col
        self.path = path
        loc = ""
        if path is not None:
            loc += f"{path}:"
        if line is not None:
            loc += f"{line}:"
            if col is not None:
                loc += f"{col}:"
        super().__init__(f"{loc} {message}" if loc else message)


class ConfigError(ApisiftError):
    """Invalid configuration value or combination."""


class ShapeError(ApisiftError):
    """Array dimensions do not match the declared contract."""


class FormatError(ApisiftError):
    """A data file violates its wire format."""


class CorpusError(ApisiftError):
    """Inconsistent corpus contents (duplicate signatures, cyclic hierarchy)."""


class LengthMismatch(ApisiftError):
    """Paired sequences differ in length."""


class MissingLabel(ApisiftError):
    """A signature required by an evaluation has no label."""
