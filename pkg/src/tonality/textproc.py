"""Tokenization, paragraph/sentence segmentation, and concept fragment extraction.

A token is a maximal run of Unicode letters and digits, case-folded; runs
shorter than two characters are dropped. Paragraphs are blocks separated by
blank lines, sentences are split on terminal punctuation. Everything here is
a pure function of its input.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Sequence

FragmentKind = Literal["paragraph", "sentence", "window"]

_WORD_RE = re.compile(r"[^\W_]+")
_TERMINATORS = ".!?…"


@dataclass(frozen=True)
class TokenSet:
    """Ordered tokens of a text plus their deduplicated set (``types``)."""

    tokens: tuple[str, ...]

    @cached_property
    def types(self) -> frozenset[str]:
        return frozenset(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class Fragment:
    """A slice of a source document; ``text == source[span[0]:span[1]]``."""

    kind: FragmentKind
    text: str
    char_span: tuple[int, int]


def _fold(run: str) -> str:
    # Case folding may introduce combining marks (e.g. Turkish dotted I);
    # strip anything that is no longer a letter or digit.
    folded = run.casefold()
    if folded.isalnum():
        return folded
    return "".join(ch for ch in folded if ch.isalnum())


def tokenize(text: str | bytes) -> TokenSet:
    """Split ``text`` into normalized word tokens.

    Tokens are maximal letter/digit runs, lowercased via case folding;
    runs shorter than two characters are dropped. Bytes input must be
    valid UTF-8.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tokens = []
    for match in _WORD_RE.finditer(text):
        if match.end() - match.start() < 2:
            continue
        folded = _fold(match.group())
        if folded:
            tokens.append(folded)
    return TokenSet(tuple(tokens))


def tokenize_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Like :func:`tokenize` but returns ``(token, start, end)`` source offsets."""
    out = []
    for match in _WORD_RE.finditer(text):
        if match.end() - match.start() < 2:
            continue
        folded = _fold(match.group())
        if folded:
            out.append((folded, match.start(), match.end()))
    return out


def _trimmed_fragment(text: str, start: int, end: int, kind: FragmentKind) -> Fragment:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return Fragment(kind, text[start:end], (start, end))


def split_paragraphs(text: str) -> list[Fragment]:
    """Split ``text`` into paragraphs: maximal blocks separated by blank lines."""
    fragments: list[Fragment] = []
    offset = 0
    block_start: int | None = None
    block_end = 0
    for line in text.splitlines(keepends=True):
        line_start = offset
        offset += len(line)
        if not line.strip():
            if block_start is not None:
                fragments.append(_trimmed_fragment(text, block_start, block_end, "paragraph"))
                block_start = None
            continue
        if block_start is None:
            block_start = line_start
        block_end = offset
    if block_start is not None:
        fragments.append(_trimmed_fragment(text, block_start, block_end, "paragraph"))
    return [f for f in fragments if f.text]


def _ends_sentence(text: str, pos: int, end: int) -> bool:
    # A terminator ends a sentence when followed by whitespace and an
    # uppercase letter or digit, or when it closes the paragraph.
    j = pos
    while j < end and text[j].isspace():
        j += 1
    if j == end:
        return True
    if j == pos:
        return False
    ch = text[j]
    return ch.isupper() or ch.isdigit()


def split_sentences(text: str) -> list[Fragment]:
    """Split ``text`` into sentences within each paragraph.

    Sentences end at '.', '!', '?' or an ellipsis followed by whitespace and
    an uppercase letter or digit, or at the paragraph end. Abbreviations such
    as "Mr." produce a known false split.
    """
    fragments: list[Fragment] = []
    for para in split_paragraphs(text):
        start, end = para.char_span
        sent_start = start
        for i in range(start, end):
            if text[i] in _TERMINATORS and _ends_sentence(text, i + 1, end):
                frag = _trimmed_fragment(text, sent_start, i + 1, "sentence")
                if frag.text:
                    fragments.append(frag)
                sent_start = i + 1
        frag = _trimmed_fragment(text, sent_start, end, "sentence")
        if frag.text:
            fragments.append(frag)
    return fragments


def contains_sequence(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    """True when ``needle`` occurs in ``haystack`` as a contiguous subsequence."""
    n, m = len(haystack), len(needle)
    if m == 0 or m > n:
        return False
    first = needle[0]
    for i in range(n - m + 1):
        if haystack[i] == first and tuple(haystack[i : i + m]) == tuple(needle):
            return True
    return False


def normalize_concept(concept: Sequence[str]) -> tuple[str, ...]:
    """Case-fold a concept token sequence; reject empty concepts."""
    normalized = tuple(_fold(token) for token in concept)
    if not normalized or any(not token for token in normalized):
        raise ValueError("concept must be a non-empty sequence of word tokens")
    return normalized


def extract_concept_fragments(
    text: str,
    concept: Sequence[str],
    kind: FragmentKind,
    window_radius: int = 5,
) -> list[Fragment]:
    """Return fragments of ``kind`` containing ``concept`` as a contiguous token run.

    For ``kind="window"`` each occurrence yields a fragment spanning
    ``window_radius`` tokens on each side of the match.
    """
    needle = normalize_concept(concept)
    if kind in ("paragraph", "sentence"):
        candidates = split_paragraphs(text) if kind == "paragraph" else split_sentences(text)
        return [f for f in candidates if contains_sequence(tokenize(f.text).tokens, needle)]
    if kind == "window":
        if window_radius < 1:
            raise ValueError("window_radius must be >= 1")
        spanned = tokenize_with_spans(text)
        words = [tok for tok, _, _ in spanned]
        m = len(needle)
        fragments = []
        for i in range(len(words) - m + 1):
            if tuple(words[i : i + m]) == needle:
                lo = max(0, i - window_radius)
                hi = min(len(words), i + m + window_radius)
                start = spanned[lo][1]
                end = spanned[hi - 1][2]
                fragments.append(Fragment("window", text[start:end], (start, end)))
        return fragments
    raise ValueError(f"unknown fragment kind: {kind!r}")
