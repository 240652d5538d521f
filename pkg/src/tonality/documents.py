"""Document records and JSON-lines ingestion helpers."""
from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from typing import Iterable, Iterator

from .textproc import TokenSet, tokenize


@dataclass(frozen=True)
class DocumentRecord:
    """One unit of classification: an id, optional UTC timestamp, and raw text."""

    id: str
    text: str
    timestamp: datetime | None = None

    @cached_property
    def tokens(self) -> TokenSet:
        return tokenize(self.text)


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC-3339 timestamp ('Z' accepted) into an aware UTC datetime."""
    raw = value.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ValueError(f"invalid timestamp {value!r}: {exc}") from None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_timestamp(moment: datetime) -> str:
    """Render a datetime as RFC-3339 with a 'Z' suffix; naive values are UTC."""
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def document_from_json(obj: object) -> DocumentRecord:
    """Build a :class:`DocumentRecord` from a decoded JSONL object."""
    if not isinstance(obj, dict):
        raise ValueError("document record must be a JSON object")
    if "id" not in obj:
        raise ValueError("document record is missing 'id'")
    doc_id = obj["id"]
    if isinstance(doc_id, (int, float)) and not isinstance(doc_id, bool):
        doc_id = str(doc_id)
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("'id' must be a non-empty string")
    text = obj.get("text")
    if not isinstance(text, str):
        raise ValueError("'text' must be a string")
    timestamp = None
    if obj.get("timestamp") is not None:
        if not isinstance(obj["timestamp"], str):
            raise ValueError("'timestamp' must be an RFC-3339 string")
        timestamp = parse_timestamp(obj["timestamp"])
    return DocumentRecord(id=doc_id, text=text, timestamp=timestamp)


def parse_document_line(line: str) -> DocumentRecord:
    """Parse one JSONL line into a document record; raises ValueError."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from None
    return document_from_json(obj)


def iter_jsonl(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, line)`` for non-blank lines, 1-based."""
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            yield lineno, line
