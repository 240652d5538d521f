"""Planted-vocabulary corpus generators shared by unit and acceptance tests."""
from __future__ import annotations

import random

from tonality import DocumentRecord, Label

POSITIVE_WORDS = tuple(f"goodword{i:02d}" for i in range(20))
NEGATIVE_WORDS = tuple(f"badword{i:02d}" for i in range(20))
FILLER_WORDS = ("market", "report", "company", "press", "daily", "update", "industry", "office")


def planted_document(
    doc_id: str,
    label: Label,
    rng: random.Random,
    p_match: float = 0.5,
    p_cross: float = 0.05,
    timestamp=None,
) -> DocumentRecord:
    """One document: own-polarity words at ``p_match``, others at ``p_cross``."""
    own = POSITIVE_WORDS if label is Label.POSITIVE else NEGATIVE_WORDS
    other = NEGATIVE_WORDS if label is Label.POSITIVE else POSITIVE_WORDS
    words = [w for w in own if rng.random() < p_match]
    words += [w for w in other if rng.random() < p_cross]
    words += rng.sample(FILLER_WORDS, k=3)
    rng.shuffle(words)
    return DocumentRecord(id=doc_id, text=" ".join(words), timestamp=timestamp)


def planted_split(n_docs: int, rng: random.Random, prefix: str):
    """Balanced positive/negative documents with gold labels, interleaved."""
    docs, golds = [], []
    for i in range(n_docs // 2):
        docs.append(planted_document(f"{prefix}-pos-{i}", Label.POSITIVE, rng))
        golds.append(Label.POSITIVE)
        docs.append(planted_document(f"{prefix}-neg-{i}", Label.NEGATIVE, rng))
        golds.append(Label.NEGATIVE)
    return docs, golds


def benchmark(seed: int = 42):
    """The 200 train + 200 test planted benchmark."""
    rng = random.Random(seed)
    return planted_split(200, rng, "train"), planted_split(200, rng, "test")


def accuracy(predict, docs, golds) -> float:
    return sum(predict(doc) is gold for doc, gold in zip(docs, golds)) / len(docs)
