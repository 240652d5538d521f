"""Shared helpers for the versioned TONALEX / TONALNET text containers.

Both formats are UTF-8 text with LF line endings: a header line, tab-separated
entry lines, then a PARAMS block of ``key=value`` lines. Floats are written as
their shortest exact decimal (``repr``), so save -> load -> save is
byte-identical.
"""
from __future__ import annotations


class FormatError(ValueError):
    """A malformed container file; the message names the offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def format_float(value: float) -> str:
    """Shortest decimal that round-trips to the same float64."""
    return repr(float(value))


def parse_float(raw: str, line: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise FormatError(f"not a number: {raw!r}", line) from None


def parse_int(raw: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise FormatError(f"not an integer: {raw!r}", line) from None


def split_kv(line: str, lineno: int) -> tuple[str, str]:
    if "=" not in line:
        raise FormatError(f"expected key=value, got {line!r}", lineno)
    key, _, value = line.partition("=")
    return key.strip(), value.strip()


def check_word(word: str, line: int) -> str:
    """Validate a lexicon/vocab word: non-empty, normalized, no whitespace."""
    if not word:
        raise FormatError("empty word", line)
    if any(ch.isspace() for ch in word):
        raise FormatError(f"word contains whitespace: {word!r}", line)
    if word != word.casefold():
        raise FormatError(f"word is not case-folded: {word!r}", line)
    return word
