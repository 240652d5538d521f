"""Classifier evaluation: confusion matrix, accuracy, per-class precision/recall."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .scoring import Label, TonalityScore

LABEL_ORDER: tuple[Label, ...] = (Label.POSITIVE, Label.NEGATIVE, Label.NEUTRAL)


@dataclass(frozen=True)
class EvalReport:
    """3x3 confusion matrix (true x predicted) and derived metrics."""

    confusion: Mapping[Label, Mapping[Label, int]]
    total: int
    accuracy: float
    precision: Mapping[Label, float]
    recall: Mapping[Label, float]
    expressive_count: int


def evaluate_predictions(pairs: Sequence[tuple[Label, TonalityScore]]) -> EvalReport:
    """Compare gold labels against predicted scores."""
    if not pairs:
        raise ValueError("cannot evaluate an empty dataset")
    confusion = {true: {pred: 0 for pred in LABEL_ORDER} for true in LABEL_ORDER}
    expressive = 0
    for gold, score in pairs:
        confusion[gold][score.label] += 1
        if score.expressive:
            expressive += 1
    total = len(pairs)
    correct = sum(confusion[label][label] for label in LABEL_ORDER)
    precision = {}
    recall = {}
    for label in LABEL_ORDER:
        predicted = sum(confusion[true][label] for true in LABEL_ORDER)
        actual = sum(confusion[label].values())
        precision[label] = confusion[label][label] / predicted if predicted else 0.0
        recall[label] = confusion[label][label] / actual if actual else 0.0
    return EvalReport(confusion, total, correct / total, precision, recall, expressive)


def report_text(report: EvalReport) -> str:
    """Aligned plain-text rendering of the report."""
    names = [label.value for label in LABEL_ORDER]
    col = max(10, max(len(n) for n in names) + 2)
    header = " " * (col + 6) + "".join(f"{'pred:' + n:>{col + 5}}" for n in names)
    lines = [header]
    for true in LABEL_ORDER:
        row = f"{'true:' + true.value:<{col + 6}}"
        row += "".join(f"{report.confusion[true][pred]:>{col + 5}}" for pred in LABEL_ORDER)
        lines.append(row)
    lines.append(f"total: {report.total}   accuracy: {report.accuracy:.6f}")
    lines.append(f"{'label':<{col}}{'precision':>12}{'recall':>12}")
    for label in LABEL_ORDER:
        lines.append(
            f"{label.value:<{col}}{report.precision[label]:>12.6f}{report.recall[label]:>12.6f}"
        )
    lines.append(f"expressive: {report.expressive_count}")
    return "\n".join(lines)


def report_json_dict(report: EvalReport) -> dict:
    """JSON-serializable rendering of the report (full float precision)."""
    return {
        "confusion": {
            true.value: {pred.value: report.confusion[true][pred] for pred in LABEL_ORDER}
            for true in LABEL_ORDER
        },
        "total": report.total,
        "accuracy": report.accuracy,
        "precision": {label.value: report.precision[label] for label in LABEL_ORDER},
        "recall": {label.value: report.recall[label] for label in LABEL_ORDER},
        "expressive_count": report.expressive_count,
    }
