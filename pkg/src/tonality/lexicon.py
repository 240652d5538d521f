"""Tone-colored word lists: induction from labeled corpora and persistence.

A lexicon holds two maps of word -> weight, one per polarity. The weight of
an entry is the estimated probability that a document containing the word has
the lexicon's polarity. Weights are estimated from document frequencies in a
positive and a negative corpus with add-one smoothing, so they always fall
strictly inside (0, 1). Words whose weight stays near 1/2 carry no tonal
signal and are never stored.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from datetime import datetime
from os import PathLike
from typing import IO, Iterable, Mapping, Sequence

from .documents import DocumentRecord, format_timestamp, parse_timestamp
from .serialization import (
    FormatError,
    check_word,
    format_float,
    parse_float,
    parse_int,
    split_kv,
)

LEXICON_HEADER = "TONALEX 1"

# PARAMS block keys in file order, mapped to ModelParams attributes.
PARAM_KEYS: tuple[tuple[str, str], ...] = (
    ("alpha", "alpha"),
    ("lambda", "lam"),
    ("beta", "beta"),
    ("gamma", "gamma"),
    ("tau_expressive", "tau_expressive"),
    ("exclusion_band", "exclusion_band"),
    ("weight_floor", "weight_floor"),
)


@dataclass(frozen=True)
class ModelParams:
    """All scoring tunables in one place.

    alpha: uniform per-word weight used by the count-based score.
    lam: prior odds ratio of the competing hypothesis ("lambda" in files).
    beta: decision threshold on the difference of the two polarity scores.
    gamma: attenuation multiplier applied to the negative evidence count.
    tau_expressive: both-polarity score level that flags expressive texts.
    exclusion_band: half-width of the ignored weight band around 1/2.
    weight_floor: minimum polarity weight required to admit a word.
    """

    alpha: float = 0.6
    lam: float = 1.0
    beta: float = 0.25
    gamma: float = 0.75
    tau_expressive: float = 0.8
    exclusion_band: float = 0.1
    weight_floor: float = 0.6

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not self.lam > 0.0 or not math.isfinite(self.lam):
            raise ValueError(f"lambda must be a positive finite number, got {self.lam}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0.0 < self.tau_expressive < 1.0:
            raise ValueError(f"tau_expressive must be in (0, 1), got {self.tau_expressive}")
        if not 0.0 <= self.exclusion_band < 0.5:
            raise ValueError(f"exclusion_band must be in [0, 0.5), got {self.exclusion_band}")
        if not 0.5 < self.weight_floor <= 1.0:
            raise ValueError(f"weight_floor must be in (0.5, 1], got {self.weight_floor}")

    def override(self, **changes: float) -> "ModelParams":
        """Return a copy with the given non-None fields replaced."""
        effective = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **effective) if effective else self


@dataclass(frozen=True)
class LexiconEntry:
    """A tone-colored word and the probability it signals the map's polarity."""

    word: str
    weight: float


@dataclass(frozen=True)
class Provenance:
    """Corpus sizes and optional creation time recorded at induction."""

    corpus_positive: int = 0
    corpus_negative: int = 0
    created: datetime | None = None


@dataclass(frozen=True)
class Lexicon:
    """Two weighted word maps plus the parameters they were induced under."""

    positive: Mapping[str, LexiconEntry]
    negative: Mapping[str, LexiconEntry]
    params: ModelParams = field(default_factory=ModelParams)
    provenance: Provenance = field(default_factory=Provenance)

    def __post_init__(self):
        for entries in (self.positive, self.negative):
            for word, entry in entries.items():
                if word != entry.word:
                    raise ValueError(f"map key {word!r} does not match entry word {entry.word!r}")
                _check_weight(entry.weight, self.params.exclusion_band, word)

    @classmethod
    def build(
        cls,
        positive: Mapping[str, float],
        negative: Mapping[str, float],
        params: ModelParams | None = None,
        provenance: Provenance | None = None,
    ) -> "Lexicon":
        """Convenience constructor from plain word -> weight mappings."""
        return cls(
            positive={w: LexiconEntry(w, float(x)) for w, x in positive.items()},
            negative={w: LexiconEntry(w, float(x)) for w, x in negative.items()},
            params=params or ModelParams(),
            provenance=provenance or Provenance(),
        )

    def __len__(self) -> int:
        return len(self.positive) + len(self.negative)


# Slack so a weight exactly at the band edge (e.g. 0.6 with band 0.1) is not
# rejected by one-ulp float noise.
_BAND_EPSILON = 1e-12


def _inside_band(weight: float, band: float) -> bool:
    return abs(weight - 0.5) < band - _BAND_EPSILON


def _check_weight(weight: float, band: float, word: str) -> None:
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight for {word!r} outside [0, 1]: {weight}")
    if _inside_band(weight, band):
        raise ValueError(
            f"weight for {word!r} lies inside the exclusion band around 0.5: {weight}"
        )


def estimate_word_weight(
    df_target: int, n_target: int, df_other: int, n_other: int, smoothing: float = 1.0
) -> float:
    """Probability that a document containing the word belongs to the target corpus.

    Uses the ratio of add-``smoothing`` smoothed document frequencies, so the
    result is always strictly inside (0, 1) and equals 1/2 when the evidence
    is symmetric.
    """
    for df, n in ((df_target, n_target), (df_other, n_other)):
        if n < 1:
            raise ValueError("corpus size must be at least 1")
        if not 0 <= df <= n:
            raise ValueError(f"document frequency {df} outside [0, {n}]")
    if smoothing <= 0:
        raise ValueError("smoothing must be positive")
    rate_target = (df_target + smoothing) / (n_target + 2 * smoothing)
    rate_other = (df_other + smoothing) / (n_other + 2 * smoothing)
    return rate_target / (rate_target + rate_other)


def induce_lexicon(
    positive_corpus: Sequence[DocumentRecord],
    negative_corpus: Sequence[DocumentRecord],
    params: ModelParams | None = None,
    created: datetime | None = None,
) -> Lexicon:
    """Build a lexicon from labeled corpora via per-word document frequencies.

    A word enters the positive map when its weight toward the positive corpus
    reaches ``weight_floor``, the negative map when the complementary weight
    does; words inside the exclusion band around 1/2 are dropped. The result
    is deterministic given the inputs (``created`` is an explicit input, not
    the wall clock).
    """
    if not positive_corpus or not negative_corpus:
        raise ValueError("both corpora must be non-empty")
    params = params or ModelParams()

    df_pos: Counter[str] = Counter()
    df_neg: Counter[str] = Counter()
    for doc in positive_corpus:
        df_pos.update(doc.tokens.types)
    for doc in negative_corpus:
        df_neg.update(doc.tokens.types)

    n_pos, n_neg = len(positive_corpus), len(negative_corpus)
    positive: dict[str, LexiconEntry] = {}
    negative: dict[str, LexiconEntry] = {}
    for word in sorted(df_pos.keys() | df_neg.keys()):
        weight = estimate_word_weight(df_pos[word], n_pos, df_neg[word], n_neg)
        if _inside_band(weight, params.exclusion_band):
            continue
        if weight >= params.weight_floor:
            positive[word] = LexiconEntry(word, weight)
        elif 1.0 - weight >= params.weight_floor:
            negative[word] = LexiconEntry(word, 1.0 - weight)
    return Lexicon(
        positive=positive,
        negative=negative,
        params=params,
        provenance=Provenance(n_pos, n_neg, created),
    )


def dumps_lexicon(lexicon: Lexicon) -> str:
    """Serialize to the TONALEX text format (entries sorted within polarity)."""
    lines = [LEXICON_HEADER]
    for tag, entries in (("P", lexicon.positive), ("N", lexicon.negative)):
        for word in sorted(entries):
            lines.append(f"{tag}\t{word}\t{format_float(entries[word].weight)}")
    lines.append("PARAMS")
    lines.extend(render_params_lines(lexicon.params))
    prov = lexicon.provenance
    lines.append(f"corpus_positive={prov.corpus_positive}")
    lines.append(f"corpus_negative={prov.corpus_negative}")
    if prov.created is not None:
        lines.append(f"created={format_timestamp(prov.created)}")
    return "\n".join(lines) + "\n"


def render_params_lines(params: ModelParams) -> list[str]:
    return [f"{key}={format_float(getattr(params, attr))}" for key, attr in PARAM_KEYS]


def save_lexicon(lexicon: Lexicon, destination: str | PathLike | IO[str]) -> None:
    """Write the TONALEX file; ``load_lexicon`` restores it field-for-field."""
    text = dumps_lexicon(lexicon)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def parse_params_items(
    items: Iterable[tuple[int, str, str]], allowed_extras: Sequence[str] = ()
) -> tuple[ModelParams, dict[str, str], dict[str, int]]:
    """Parse PARAMS-block key/value items into a ModelParams plus extras.

    Returns (params, extras, extras_linenos). Unknown or duplicate keys raise
    :class:`FormatError`.
    """
    by_attr: dict[str, float] = {}
    extras: dict[str, str] = {}
    extras_linenos: dict[str, int] = {}
    attr_for_key = dict(PARAM_KEYS)
    seen: set[str] = set()
    last_line = 0
    for lineno, key, value in items:
        last_line = lineno
        if key in seen:
            raise FormatError(f"duplicate key {key!r}", lineno)
        seen.add(key)
        if key in attr_for_key:
            by_attr[attr_for_key[key]] = parse_float(value, lineno)
        elif key in allowed_extras:
            extras[key] = value
            extras_linenos[key] = lineno
        else:
            raise FormatError(f"unknown key {key!r}", lineno)
    try:
        params = ModelParams(**by_attr)
    except ValueError as exc:
        raise FormatError(str(exc), last_line) from None
    return params, extras, extras_linenos


def loads_lexicon(text: str) -> Lexicon:
    """Parse TONALEX content; malformed input raises :class:`FormatError`."""
    lines = text.splitlines()
    if not lines or lines[0] != LEXICON_HEADER:
        found = lines[0] if lines else "<empty file>"
        raise FormatError(f"expected header {LEXICON_HEADER!r}, found {found!r}", 1)

    entries: dict[str, dict[str, LexiconEntry]] = {"P": {}, "N": {}}
    entry_linenos: dict[tuple[str, str], int] = {}
    kv_items: list[tuple[int, str, str]] = []
    in_params = False
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line == "PARAMS":
            if in_params:
                raise FormatError("duplicate PARAMS section", lineno)
            in_params = True
            continue
        if in_params:
            key, value = split_kv(line, lineno)
            kv_items.append((lineno, key, value))
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 tab-separated fields, got {len(fields)}", lineno)
        tag, word, raw_weight = fields
        if tag not in ("P", "N"):
            raise FormatError(f"unknown polarity tag {tag!r}", lineno)
        word = check_word(word, lineno)
        weight = parse_float(raw_weight, lineno)
        if word in entries[tag]:
            raise FormatError(f"duplicate word {word!r} in polarity {tag}", lineno)
        entries[tag][word] = LexiconEntry(word, weight)
        entry_linenos[(tag, word)] = lineno
    if not in_params:
        raise FormatError("missing PARAMS section", len(lines))

    params, extras, extras_linenos = parse_params_items(
        kv_items, allowed_extras=("corpus_positive", "corpus_negative", "created")
    )
    created = None
    if "created" in extras:
        try:
            created = parse_timestamp(extras["created"])
        except ValueError as exc:
            raise FormatError(str(exc), extras_linenos["created"]) from None
    provenance = Provenance(
        corpus_positive=parse_int(extras.get("corpus_positive", "0"), extras_linenos.get("corpus_positive", 0)),
        corpus_negative=parse_int(extras.get("corpus_negative", "0"), extras_linenos.get("corpus_negative", 0)),
        created=created,
    )

    for tag, polarity in (("P", "positive"), ("N", "negative")):
        for word, entry in entries[tag].items():
            try:
                _check_weight(entry.weight, params.exclusion_band, word)
            except ValueError as exc:
                raise FormatError(str(exc), entry_linenos[(tag, word)]) from None
    return Lexicon(
        positive=entries["P"], negative=entries["N"], params=params, provenance=provenance
    )


def load_lexicon(source: str | PathLike | IO[str]) -> Lexicon:
    """Read a TONALEX file from a path or text stream."""
    if hasattr(source, "read"):
        return loads_lexicon(source.read())
    with open(source, "r", encoding="utf-8") as fh:
        return loads_lexicon(fh.read())
