"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from datetime import datetime, timezone
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ..channel import ChannelReport
from ..documents import DocumentRecord
from ..evaluation import EvalReport, report_json_dict
from ..lexicon import ModelParams
from ..scoring import Label, TonalityScore


class ParamOverrides(BaseModel):
    """Partial model parameters; unset fields keep the lexicon's snapshot."""

    model_config = ConfigDict(populate_by_name=True)

    alpha: float | None = None
    lam: float | None = Field(default=None, alias="lambda")
    beta: float | None = None
    gamma: float | None = None
    tau_expressive: float | None = None
    exclusion_band: float | None = None
    weight_floor: float | None = None

    def apply(self, base: ModelParams) -> ModelParams:
        return base.override(**self.model_dump())


class DocumentIn(BaseModel):
    id: str = Field(min_length=1)
    text: str
    timestamp: datetime | None = None

    def to_record(self) -> DocumentRecord:
        moment = self.timestamp
        if moment is not None:
            if moment.tzinfo is None:
                moment = moment.replace(tzinfo=timezone.utc)
            moment = moment.astimezone(timezone.utc)
        return DocumentRecord(id=self.id, text=self.text, timestamp=moment)


class LabeledDocumentIn(DocumentIn):
    gold: Label


class ScoreOut(BaseModel):
    id: str
    out_pos: float
    out_neg: float
    delta: float
    label: Label
    expressive: bool

    @classmethod
    def from_score(cls, doc_id: str, score: TonalityScore) -> "ScoreOut":
        return cls(
            id=doc_id,
            out_pos=score.out_pos,
            out_neg=score.out_neg,
            delta=score.delta,
            label=score.label,
            expressive=score.expressive,
        )


class LexiconInfo(BaseModel):
    lexicon_id: str
    positive_entries: int
    negative_entries: int


class InduceRequest(BaseModel):
    positive: list[DocumentIn] = Field(min_length=1)
    negative: list[DocumentIn] = Field(min_length=1)
    params: ParamOverrides | None = None


class ImportRequest(BaseModel):
    content: str = Field(description="TONALEX or TONALNET file content")


class ClassifyRequest(BaseModel):
    documents: list[DocumentIn] = Field(min_length=1)
    params: ParamOverrides | None = None
    exact_weights: bool = Field(
        default=False, description="combine each entry's own weight instead of the uniform count"
    )


class EvaluateRequest(BaseModel):
    documents: list[LabeledDocumentIn] = Field(min_length=1)
    params: ParamOverrides | None = None


class EvalReportOut(BaseModel):
    confusion: dict[str, dict[str, int]]
    total: int
    accuracy: float
    precision: dict[str, float]
    recall: dict[str, float]
    expressive_count: int

    @classmethod
    def from_report(cls, report: EvalReport) -> "EvalReportOut":
        return cls(**report_json_dict(report))


class ConceptRequest(BaseModel):
    concept: str = Field(min_length=1, description="concept word or phrase")
    documents: list[DocumentIn] = Field(min_length=1)
    granularity: Literal["document", "paragraph", "sentence", "window"] = "document"
    window_radius: int = Field(default=5, ge=1)
    bucket_seconds: float | None = Field(default=None, gt=0)
    params: ParamOverrides | None = None


class CountsOut(BaseModel):
    positive: int
    negative: int
    neutral: int
    expressive: int


class BucketOut(BaseModel):
    start: datetime
    positive: int
    negative: int
    neutral: int


class ChannelReportOut(BaseModel):
    concept: list[str]
    counts: CountsOut
    integral_label: Label
    per_document: list[ScoreOut]
    buckets: list[BucketOut] | None = None

    @classmethod
    def from_report(cls, report: ChannelReport) -> "ChannelReportOut":
        return cls(
            concept=list(report.concept),
            counts=CountsOut(
                positive=report.counts.positive,
                negative=report.counts.negative,
                neutral=report.counts.neutral,
                expressive=report.counts.expressive,
            ),
            integral_label=report.integral_label,
            per_document=[ScoreOut.from_score(doc_id, s) for doc_id, s in report.per_document],
            buckets=None
            if report.buckets is None
            else [
                BucketOut(start=b.start, positive=b.positive, negative=b.negative, neutral=b.neutral)
                for b in report.buckets
            ],
        )


class TrainRequest(BaseModel):
    documents: list[LabeledDocumentIn] = Field(min_length=1)
    epochs: int = Field(default=10, ge=0)
    learning_rate: float = Field(default=0.1, ge=0)
    seed: int | None = None
    params: ParamOverrides | None = None


class TrainOut(BaseModel):
    model_id: str
    epoch_mean_loss: list[float]


class ModelInfo(BaseModel):
    model_id: str
    vocab_size: int


class HealthOut(BaseModel):
    status: str
    version: str
