"""Indian registration plate grammar and look-alike correction.

A plate reads ``state(2 letters) district(2 digits) series(0-3 letters)
serial(1-4 digits)``. When the series/serial split is ambiguous the serial
takes as many characters as it can (up to four).
"""
from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from typing import Mapping

from .errors import BadLength, ClassMismatch, InvalidCharacter

LETTER = "L"
DIGIT = "D"
MIN_LEN = 6
MAX_LEN = 11

_LETTERS = frozenset(string.ascii_uppercase)
_DIGITS = frozenset(string.digits)


@dataclass(frozen=True)
class PlateParse:
    state: str
    district: str
    series: str
    serial: str

    @property
    def text(self) -> str:
        return self.state + self.district + self.series + self.serial

    def __str__(self) -> str:
        return " ".join(p for p in (self.state, self.district, self.series, self.serial) if p)


@dataclass(frozen=True)
class AnalogTable:
    """Look-alike substitutions between the digit and letter classes."""

    digit_to_letter: Mapping[str, str]
    letter_to_digit: Mapping[str, str]

    def __post_init__(self):
        for d, letter in self.digit_to_letter.items():
            if d not in _DIGITS or letter not in _LETTERS:
                raise ValueError(f"bad digit->letter pair {d!r}->{letter!r}")
            if self.letter_to_digit.get(letter) != d:
                raise ValueError(f"{d!r}->{letter!r} does not round-trip")
        for letter, d in self.letter_to_digit.items():
            if letter not in _LETTERS or d not in _DIGITS:
                raise ValueError(f"bad letter->digit pair {letter!r}->{d!r}")

    def canonical_pairs(self) -> list[tuple[str, str]]:
        """(digit, letter) pairs that survive a substitution in either direction."""
        return sorted(self.digit_to_letter.items())


DEFAULT_TABLE = AnalogTable(
    digit_to_letter={"0": "O", "1": "I", "2": "Z", "4": "A", "5": "S", "6": "G", "7": "T", "8": "B"},
    letter_to_digit={
        "O": "0", "Q": "0", "D": "0",
        "I": "1", "L": "1",
        "Z": "2", "A": "4", "S": "5", "G": "6", "T": "7", "B": "8",
    },
)


@dataclass(frozen=True)
class CorrectionResult:
    corrected: str
    changed_positions: list[int] = field(default_factory=list)
    unresolved: list[int] = field(default_factory=list)


def char_class(c: str, position: int = -1) -> str:
    if c in _LETTERS:
        return LETTER
    if c in _DIGITS:
        return DIGIT
    raise InvalidCharacter(c, position)


def normalize(raw: str) -> str:
    """Strip spaces and hyphens, uppercase, and check the alphabet and length."""
    if not raw:
        raise BadLength(0)
    out = []
    for i, c in enumerate(raw):
        if c in " -":
            continue
        up = c.upper()
        if not (up in _LETTERS or up in _DIGITS) or not c.isascii():
            raise InvalidCharacter(c, i)
        out.append(up)
    text = "".join(out)
    if not MIN_LEN <= len(text) <= MAX_LEN:
        raise BadLength(len(text))
    return text


def slot_layout(text: str) -> list[str]:
    """Expected character class per position, e.g. ``LLDDLLDDDD`` for length 10."""
    n = len(text)
    if not MIN_LEN <= n <= MAX_LEN:
        raise BadLength(n)
    serial_len = min(4, n - 4)
    series_len = n - 4 - serial_len
    return [LETTER] * 2 + [DIGIT] * 2 + [LETTER] * series_len + [DIGIT] * serial_len


def correct(text: str, table: AnalogTable = DEFAULT_TABLE) -> CorrectionResult:
    """Swap each class-violating character for its look-alike in the right class."""
    layout = slot_layout(text)
    chars = list(text)
    changed: list[int] = []
    unresolved: list[int] = []
    for i, (c, want) in enumerate(zip(text, layout)):
        if char_class(c, i) == want:
            continue
        mapping = table.digit_to_letter if want == LETTER else table.letter_to_digit
        sub = mapping.get(c)
        if sub is None:
            unresolved.append(i)
        else:
            chars[i] = sub
            changed.append(i)
    return CorrectionResult("".join(chars), changed, unresolved)


def validate(text: str) -> PlateParse:
    layout = slot_layout(text)
    for i, (c, want) in enumerate(zip(text, layout)):
        if char_class(c, i) != want:
            raise ClassMismatch(i, c, "letter" if want == LETTER else "digit")
    series_len = layout.count(LETTER) - 2
    return PlateParse(text[:2], text[2:4], text[4 : 4 + series_len], text[4 + series_len :])


def random_plate(rng: random.Random, length: int | None = None) -> str:
    """Uniform random plate that validates, of the given (or a random) length."""
    if length is None:
        length = rng.randint(MIN_LEN, MAX_LEN)
    layout = slot_layout("X" * length)
    pools = {LETTER: string.ascii_uppercase, DIGIT: string.digits}
    return "".join(rng.choice(pools[slot]) for slot in layout)
