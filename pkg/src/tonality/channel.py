"""Concept-level tonality over fragments and channel aggregation.

Instead of scoring a whole document, a concept can be scored on just the
fragments that mention it (paragraph, sentence, or a token window). Within a
document the most decisive fragment wins (largest absolute score difference,
earliest on ties). Across a channel the per-document labels are aggregated by
plurality vote, with ties falling back to neutral, and optionally bucketed
over time for the stacked trend chart.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import Literal, Sequence

from .documents import DocumentRecord, format_timestamp
from .lexicon import Lexicon, ModelParams
from .scoring import Label, TonalityScore, combine_uniform, score_document
from .textproc import contains_sequence, extract_concept_fragments, normalize_concept, tokenize

Granularity = Literal["document", "paragraph", "sentence", "window"]

GRANULARITIES: tuple[Granularity, ...] = ("document", "paragraph", "sentence", "window")

# Fill colors of the stacked time-series bars.
POSITIVE_FILL = "#2e8b57"
NEGATIVE_FILL = "#b22222"
NEUTRAL_FILL = "#9e9e9e"


@dataclass(frozen=True)
class ChannelCounts:
    positive: int
    negative: int
    neutral: int
    expressive: int  # subset of neutral, reported separately


@dataclass(frozen=True)
class TimeBucket:
    start: datetime
    positive: int
    negative: int
    neutral: int


@dataclass(frozen=True)
class ChannelReport:
    concept: tuple[str, ...]
    per_document: tuple[tuple[str, TonalityScore], ...]
    counts: ChannelCounts
    integral_label: Label
    buckets: tuple[TimeBucket, ...] | None = None


def no_evidence_score(params: ModelParams) -> TonalityScore:
    """The score of a document carrying no evidence: both sides at the prior."""
    out = combine_uniform(0.0, params.alpha, params.lam)
    return TonalityScore.from_outputs(out, out, params)


def concept_tonality(
    doc: DocumentRecord,
    concept: Sequence[str],
    lexicon: Lexicon,
    params: ModelParams | None = None,
    granularity: Granularity = "document",
    window_radius: int = 5,
) -> TonalityScore:
    """Tonality of ``doc`` with respect to ``concept``.

    At document granularity the whole text is scored when it mentions the
    concept. At finer granularities only fragments containing the concept are
    scored and the one with the largest absolute difference decides (earliest
    fragment on ties). Without any mention the no-evidence score is returned.
    """
    params = params if params is not None else lexicon.params
    needle = normalize_concept(concept)
    if granularity == "document":
        if contains_sequence(doc.tokens.tokens, needle):
            return score_document(doc.tokens, lexicon, params)
        return no_evidence_score(params)
    if granularity not in GRANULARITIES:
        raise ValueError(f"unknown granularity: {granularity!r}")
    fragments = extract_concept_fragments(doc.text, needle, granularity, window_radius)
    best: TonalityScore | None = None
    for fragment in fragments:
        score = score_document(tokenize(fragment.text), lexicon, params)
        if best is None or abs(score.delta) > abs(best.delta):
            best = score
    return best if best is not None else no_evidence_score(params)


def _plurality(labels: Sequence[Label]) -> Label:
    tally = {Label.POSITIVE: 0, Label.NEGATIVE: 0, Label.NEUTRAL: 0}
    for label in labels:
        tally[label] += 1
    top = max(tally.values())
    winners = [label for label, count in tally.items() if count == top]
    return winners[0] if len(winners) == 1 else Label.NEUTRAL


def _bucket_counts(
    stamped: Sequence[tuple[datetime, Label]], width: timedelta
) -> tuple[TimeBucket, ...]:
    seconds = width.total_seconds()
    if seconds <= 0:
        raise ValueError("bucket width must be positive")
    by_index: dict[int, dict[Label, int]] = {}
    for moment, label in stamped:
        idx = int(moment.timestamp() // seconds)
        counts = by_index.setdefault(idx, {Label.POSITIVE: 0, Label.NEGATIVE: 0, Label.NEUTRAL: 0})
        counts[label] += 1
    buckets = []
    for idx in range(min(by_index), max(by_index) + 1):
        counts = by_index.get(idx, {Label.POSITIVE: 0, Label.NEGATIVE: 0, Label.NEUTRAL: 0})
        start = datetime.fromtimestamp(idx * seconds, tz=timezone.utc)
        buckets.append(
            TimeBucket(start, counts[Label.POSITIVE], counts[Label.NEGATIVE], counts[Label.NEUTRAL])
        )
    return tuple(buckets)


def channel_report(
    docs: Sequence[DocumentRecord],
    concept: Sequence[str],
    lexicon: Lexicon,
    params: ModelParams | None = None,
    granularity: Granularity = "document",
    window_radius: int = 5,
    bucket: timedelta | None = None,
) -> ChannelReport:
    """Score every document against ``concept`` and aggregate the channel.

    With ``bucket`` set, documents carrying timestamps are additionally
    counted into fixed-width, epoch-aligned, half-open time buckets (empty
    buckets in the covered range are included; untimestamped documents only
    contribute to the overall counts).
    """
    if not docs:
        raise ValueError("docs must be non-empty")
    ids = [doc.id for doc in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("document ids must be unique within a channel")
    params = params if params is not None else lexicon.params
    needle = normalize_concept(concept)

    per_document = tuple(
        (doc.id, concept_tonality(doc, needle, lexicon, params, granularity, window_radius))
        for doc in docs
    )
    labels = [score.label for _, score in per_document]
    counts = ChannelCounts(
        positive=sum(1 for l in labels if l is Label.POSITIVE),
        negative=sum(1 for l in labels if l is Label.NEGATIVE),
        neutral=sum(1 for l in labels if l is Label.NEUTRAL),
        expressive=sum(1 for _, s in per_document if s.expressive),
    )

    buckets = None
    if bucket is not None:
        stamped = [
            (doc.timestamp, score.label)
            for doc, (_, score) in zip(docs, per_document)
            if doc.timestamp is not None
        ]
        if not stamped:
            raise ValueError("bucketing requested but no document carries a timestamp")
        buckets = _bucket_counts(stamped, bucket)

    return ChannelReport(needle, per_document, counts, _plurality(labels), buckets)


def render_timeseries(report: ChannelReport, fmt: Literal["csv", "svg"] = "csv") -> bytes:
    """Serialize the report's time buckets as CSV rows or a stacked bar SVG.

    Output bytes are deterministic for identical input.
    """
    if report.buckets is None:
        raise ValueError("report has no time buckets; build it with a bucket width")
    if fmt == "csv":
        lines = ["bucket_start,positive,negative,neutral"]
        for b in report.buckets:
            lines.append(f"{format_timestamp(b.start)},{b.positive},{b.negative},{b.neutral}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "svg":
        return _render_svg(report.buckets)
    raise ValueError(f"unknown format: {fmt!r}")


def _render_svg(buckets: Sequence[TimeBucket]) -> bytes:
    margin_left, margin_top, margin_bottom = 50, 10, 34
    bar_width, gap, plot_height = 40, 12, 200
    width = margin_left + len(buckets) * (bar_width + gap) + gap
    height = margin_top + plot_height + margin_bottom
    baseline = margin_top + plot_height
    peak = max((b.positive + b.negative + b.neutral for b in buckets), default=0) or 1

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{margin_left}" y1="{baseline}" x2="{width - gap}" y2="{baseline}" '
        'stroke="#333333" stroke-width="1"/>',
        f'<text x="{margin_left - 6}" y="{margin_top + 4}" font-size="10" '
        f'text-anchor="end" fill="#333333">{peak}</text>',
    ]
    for i, b in enumerate(buckets):
        x = margin_left + gap + i * (bar_width + gap)
        y = float(baseline)
        for count, fill in (
            (b.positive, POSITIVE_FILL),
            (b.negative, NEGATIVE_FILL),
            (b.neutral, NEUTRAL_FILL),
        ):
            if not count:
                continue
            h = count / peak * plot_height
            y -= h
            parts.append(
                f'<rect x="{x}" y="{y:.2f}" width="{bar_width}" height="{h:.2f}" fill="{fill}"/>'
            )
        stamp = format_timestamp(b.start)[:16]
        parts.append(
            f'<text x="{x + bar_width / 2:.1f}" y="{baseline + 14}" font-size="8" '
            f'text-anchor="middle" fill="#333333">{stamp}</text>'
        )
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")
