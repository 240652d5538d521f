from __future__ import annotations

import json

import pytest

from tonality import Label, TonalityScore, evaluate_predictions
from tonality.evaluation import report_json_dict, report_text

P, N, U = Label.POSITIVE, Label.NEGATIVE, Label.NEUTRAL


def fake_score(label, expressive=False):
    delta = {P: 0.4, N: -0.4, U: 0.0}[label]
    out = 0.9 if expressive else 0.5
    return TonalityScore(out, out, delta, label, expressive)


class TestEvaluatePredictions:
    def test_all_neutral_perfect_accuracy(self):
        pairs = [(U, fake_score(U)) for _ in range(4)]
        report = evaluate_predictions(pairs)
        assert report.accuracy == 1.0
        assert report.confusion[U][U] == 4

    def test_known_confusion_matrix(self):
        pairs = (
            [(P, fake_score(P))] * 5
            + [(P, fake_score(U))] * 1
            + [(N, fake_score(N))] * 3
            + [(N, fake_score(P))] * 1
            + [(U, fake_score(U, expressive=True))] * 2
        )
        report = evaluate_predictions(pairs)
        assert report.total == 12
        assert report.confusion[P][P] == 5
        assert report.confusion[P][U] == 1
        assert report.confusion[N][N] == 3
        assert report.confusion[N][P] == 1
        assert report.confusion[U][U] == 2
        assert report.accuracy == pytest.approx(10 / 12)
        assert report.precision[P] == pytest.approx(5 / 6)
        assert report.recall[P] == pytest.approx(5 / 6)
        assert report.precision[N] == pytest.approx(1.0)
        assert report.recall[N] == pytest.approx(3 / 4)
        assert report.expressive_count == 2

    def test_zero_denominators_give_zero(self):
        pairs = [(P, fake_score(U))]
        report = evaluate_predictions(pairs)
        assert report.precision[N] == 0.0
        assert report.recall[N] == 0.0
        assert report.precision[P] == 0.0

    def test_entries_sum_to_total(self):
        pairs = [(P, fake_score(N)), (N, fake_score(N)), (U, fake_score(P))]
        report = evaluate_predictions(pairs)
        total = sum(report.confusion[t][p] for t in (P, N, U) for p in (P, N, U))
        assert total == report.total == 3

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            evaluate_predictions([])


class TestRendering:
    def test_text_report_is_aligned_and_complete(self):
        pairs = [(P, fake_score(P)), (N, fake_score(U))]
        text = report_text(evaluate_predictions(pairs))
        lines = text.splitlines()
        assert "pred:positive" in lines[0]
        assert lines[1].startswith("true:positive")
        assert "accuracy: 0.500000" in text
        assert "expressive: 0" in text

    def test_json_dict_serializes(self):
        pairs = [(P, fake_score(P))]
        payload = report_json_dict(evaluate_predictions(pairs))
        restored = json.loads(json.dumps(payload))
        assert restored["accuracy"] == 1.0
        assert restored["confusion"]["positive"]["positive"] == 1
        assert restored["total"] == 1
