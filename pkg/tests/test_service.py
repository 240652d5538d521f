from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from tonality import (
    DocumentRecord,
    Lexicon,
    ModelParams,
    dumps_lexicon,
    induce_lexicon,
    loads_lexicon,
    score_document,
    score_with_exact_weights,
    tokenize,
)
from tonality.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def doc(doc_id, text, **extra):
    return {"id": doc_id, "text": text, **extra}


POSITIVE_CORPUS = [doc(f"p{i}", "triumph glory shine bright wonderful") for i in range(6)]
NEGATIVE_CORPUS = [doc(f"n{i}", "disaster gloom ruin dreadful misery") for i in range(6)]


@pytest.fixture
def lexicon_id(client):
    response = client.post(
        "/lexicons", json={"positive": POSITIVE_CORPUS, "negative": NEGATIVE_CORPUS}
    )
    assert response.status_code == 200, response.text
    return response.json()["lexicon_id"]


def reference_lexicon():
    return induce_lexicon(
        [DocumentRecord(d["id"], d["text"]) for d in POSITIVE_CORPUS],
        [DocumentRecord(d["id"], d["text"]) for d in NEGATIVE_CORPUS],
    )


class TestHealthAndRegistry:
    def test_health(self, client):
        payload = client.get("/health").json()
        assert payload["status"] == "ok"

    def test_unknown_lexicon_is_404(self, client):
        assert client.get("/lexicons/lex-999").status_code == 404
        response = client.post(
            "/lexicons/lex-999/classify", json={"documents": [doc("d", "x")]}
        )
        assert response.status_code == 404

    def test_unknown_model_is_404(self, client):
        assert client.get("/models/net-1").status_code == 404


class TestLexiconEndpoints:
    def test_induce_reports_entry_counts(self, client):
        response = client.post(
            "/lexicons", json={"positive": POSITIVE_CORPUS, "negative": NEGATIVE_CORPUS}
        )
        payload = response.json()
        reference = reference_lexicon()
        assert payload["positive_entries"] == len(reference.positive)
        assert payload["negative_entries"] == len(reference.negative)

    def test_export_matches_library_serialization(self, client, lexicon_id):
        response = client.get(f"/lexicons/{lexicon_id}")
        assert response.status_code == 200
        assert response.text == dumps_lexicon(reference_lexicon())

    def test_import_round_trip(self, client, lexicon_id):
        content = client.get(f"/lexicons/{lexicon_id}").text
        imported = client.post("/lexicons/import", json={"content": content}).json()
        docs = [doc("d", "triumph gloom glory")]
        first = client.post(f"/lexicons/{lexicon_id}/classify", json={"documents": docs})
        second = client.post(
            f"/lexicons/{imported['lexicon_id']}/classify", json={"documents": docs}
        )
        assert first.json() == second.json()

    def test_import_malformed_is_400(self, client):
        response = client.post(
            "/lexicons/import", json={"content": "TONALEX 1\nP\tgood\t1.3\nPARAMS\n"}
        )
        assert response.status_code == 400
        assert "line 2" in response.json()["detail"]

    def test_induce_with_params_override_via_lambda_alias(self, client):
        response = client.post(
            "/lexicons",
            json={
                "positive": POSITIVE_CORPUS,
                "negative": NEGATIVE_CORPUS,
                "params": {"lambda": 2.0, "beta": 0.1},
            },
        )
        assert response.status_code == 200
        content = client.get(f"/lexicons/{response.json()['lexicon_id']}").text
        assert "lambda=2.0" in content and "beta=0.1" in content

    def test_empty_corpus_is_422(self, client):
        response = client.post("/lexicons", json={"positive": [], "negative": NEGATIVE_CORPUS})
        assert response.status_code == 422


class TestClassifyEndpoints:
    def test_scores_match_library(self, client, lexicon_id):
        text = "triumph glory against ruin"
        response = client.post(
            f"/lexicons/{lexicon_id}/classify", json={"documents": [doc("d1", text)]}
        )
        (record,) = response.json()
        expected = score_document(tokenize(text), reference_lexicon())
        assert record["out_pos"] == expected.out_pos
        assert record["out_neg"] == expected.out_neg
        assert record["delta"] == expected.delta
        assert record["label"] == expected.label.value
        assert record["expressive"] == expected.expressive

    def test_exact_weights_variant(self, client, lexicon_id):
        text = "triumph ruin"
        response = client.post(
            f"/lexicons/{lexicon_id}/classify",
            json={"documents": [doc("d1", text)], "exact_weights": True},
        )
        (record,) = response.json()
        expected = score_with_exact_weights(tokenize(text), reference_lexicon())
        assert record["out_pos"] == expected.out_pos
        assert record["out_neg"] == expected.out_neg

    def test_param_override_changes_labels(self, client, lexicon_id):
        docs = [doc("d1", "triumph calm day")]
        default = client.post(
            f"/lexicons/{lexicon_id}/classify", json={"documents": docs}
        ).json()
        narrowed = client.post(
            f"/lexicons/{lexicon_id}/classify",
            json={"documents": docs, "params": {"beta": 0.01}},
        ).json()
        assert default[0]["label"] == "neutral"
        assert narrowed[0]["label"] == "positive"

    def test_empty_documents_is_422(self, client, lexicon_id):
        response = client.post(f"/lexicons/{lexicon_id}/classify", json={"documents": []})
        assert response.status_code == 422


class TestEvaluateEndpoint:
    def test_accuracy_and_confusion(self, client, lexicon_id):
        documents = [
            doc("a", "triumph glory shine bright", gold="positive"),
            doc("b", "disaster ruin gloom dreadful", gold="negative"),
            doc("c", "nothing here", gold="neutral"),
        ]
        payload = client.post(
            f"/lexicons/{lexicon_id}/evaluate", json={"documents": documents}
        ).json()
        assert payload["total"] == 3
        assert payload["accuracy"] == 1.0
        assert payload["confusion"]["positive"]["positive"] == 1

    def test_unknown_gold_is_422(self, client, lexicon_id):
        response = client.post(
            f"/lexicons/{lexicon_id}/evaluate",
            json={"documents": [doc("a", "x", gold="meh")]},
        )
        assert response.status_code == 422


class TestConceptEndpoints:
    def _documents(self):
        return [
            doc("d0", "acme triumph glory shine bright", timestamp="2026-03-01T09:00:00Z"),
            doc("d1", "acme disaster gloom ruin dreadful", timestamp="2026-03-02T09:00:00Z"),
            doc("d2", "acme triumph glory shine bright", timestamp="2026-03-03T09:00:00Z"),
        ]

    def test_report_counts_and_integral(self, client, lexicon_id):
        payload = client.post(
            f"/lexicons/{lexicon_id}/concept",
            json={"concept": "acme", "documents": self._documents()},
        ).json()
        assert payload["counts"] == {"positive": 2, "negative": 1, "neutral": 0, "expressive": 0}
        assert payload["integral_label"] == "positive"
        assert payload["buckets"] is None

    def test_bucketed_report(self, client, lexicon_id):
        payload = client.post(
            f"/lexicons/{lexicon_id}/concept",
            json={
                "concept": "acme",
                "documents": self._documents(),
                "bucket_seconds": 86400,
            },
        ).json()
        assert len(payload["buckets"]) == 3
        assert payload["buckets"][0]["positive"] == 1

    def test_timeseries_csv_bytes(self, client, lexicon_id):
        response = client.post(
            f"/lexicons/{lexicon_id}/concept/timeseries?fmt=csv",
            json={
                "concept": "acme",
                "documents": self._documents(),
                "bucket_seconds": 86400,
            },
        )
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/csv")
        rows = response.text.splitlines()
        assert rows[0] == "bucket_start,positive,negative,neutral"
        assert rows[1] == "2026-03-01T00:00:00Z,1,0,0"

    def test_timeseries_svg(self, client, lexicon_id):
        body = {
            "concept": "acme",
            "documents": self._documents(),
            "bucket_seconds": 86400,
        }
        response = client.post(f"/lexicons/{lexicon_id}/concept/timeseries?fmt=svg", json=body)
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("image/svg+xml")
        assert response.content.startswith(b"<?xml")
        again = client.post(f"/lexicons/{lexicon_id}/concept/timeseries?fmt=svg", json=body)
        assert response.content == again.content

    def test_timeseries_without_bucket_is_422(self, client, lexicon_id):
        response = client.post(
            f"/lexicons/{lexicon_id}/concept/timeseries?fmt=csv",
            json={"concept": "acme", "documents": self._documents()},
        )
        assert response.status_code == 422

    def test_punctuation_concept_is_422(self, client, lexicon_id):
        response = client.post(
            f"/lexicons/{lexicon_id}/concept",
            json={"concept": "!!!", "documents": self._documents()},
        )
        assert response.status_code == 422


class TestTrainEndpoints:
    def _training_documents(self):
        return [
            doc("t0", "triumph glory shine bright", gold="positive"),
            doc("t1", "disaster gloom ruin dreadful", gold="negative"),
        ] * 5

    def test_train_returns_losses_and_stores_model(self, client, lexicon_id):
        payload = client.post(
            f"/lexicons/{lexicon_id}/train",
            json={"documents": self._training_documents(), "epochs": 3, "learning_rate": 0.1},
        ).json()
        assert len(payload["epoch_mean_loss"]) == 3
        exported = client.get(f"/models/{payload['model_id']}")
        assert exported.status_code == 200
        assert exported.text.startswith("TONALNET 1\n")

    def test_untrained_model_classifies_like_lexicon(self, client, lexicon_id):
        trained = client.post(
            f"/lexicons/{lexicon_id}/train",
            json={"documents": self._training_documents(), "epochs": 0},
        ).json()
        docs = [doc("d", "triumph gloom glory extra")]
        via_model = client.post(
            f"/models/{trained['model_id']}/classify", json={"documents": docs}
        ).json()
        via_lexicon = client.post(
            f"/lexicons/{lexicon_id}/classify", json={"documents": docs}
        ).json()
        assert via_model == via_lexicon

    def test_model_import_round_trip(self, client, lexicon_id):
        trained = client.post(
            f"/lexicons/{lexicon_id}/train",
            json={"documents": self._training_documents(), "epochs": 2, "seed": 5},
        ).json()
        content = client.get(f"/models/{trained['model_id']}").text
        imported = client.post("/models/import", json={"content": content}).json()
        assert imported["vocab_size"] == len(loads_lexicon(
            client.get(f"/lexicons/{lexicon_id}").text
        ).positive) + len(reference_lexicon().negative)
        assert client.get(f"/models/{imported['model_id']}").text == content

    def test_import_malformed_model_is_400(self, client):
        response = client.post("/models/import", json={"content": "TONALNET 9\nPARAMS\n"})
        assert response.status_code == 400
