"""Exception hierarchy for the plate pipeline."""
from __future__ import annotations


class PlateWatchError(Exception):
    """Base class for every error raised by this package."""


class PlateFormatError(PlateWatchError, ValueError):
    pass


class InvalidCharacter(PlateFormatError):
    def __init__(self, char: str, position: int):
        super().__init__(f"invalid plate character {char!r} at position {position}")
        self.char = char
        self.position = position


class BadLength(PlateFormatError):
    def __init__(self, length: int):
        super().__init__(f"plate length {length} outside 6..11")
        self.length = length


class ClassMismatch(PlateFormatError):
    def __init__(self, position: int, char: str, expected: str):
        super().__init__(f"{char!r} at position {position} is not a {expected}")
        self.position = position
        self.char = char
        self.expected = expected


class NetpbmError(PlateWatchError, ValueError):
    pass


class BadMagic(NetpbmError):
    pass


class TruncatedData(NetpbmError):
    pass


class UnsupportedMaxval(NetpbmError):
    pass


class OutOfBounds(PlateWatchError, ValueError):
    pass


class TooSmall(PlateWatchError, ValueError):
    pass


class BadFps(PlateWatchError, ValueError):
    pass


class NoGlyphs(PlateWatchError):
    pass


class BlankGlyph(PlateWatchError, ValueError):
    pass


class SpecInvalid(PlateWatchError, ValueError):
    pass


class MalformedRecord(PlateWatchError, ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
