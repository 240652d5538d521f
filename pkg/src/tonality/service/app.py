"""FastAPI service wrapping the core package.

Lexicons and trained perceptron models live in an in-memory registry; both
are immutable once stored, so concurrent readers are safe. The CLI offers the
same operations for offline use; run the service with::

    uvicorn tonality.service.app:app
"""
from __future__ import annotations

import threading
from datetime import timedelta
from typing import Literal

from fastapi import FastAPI, HTTPException, Response

from .. import __version__
from ..channel import channel_report, render_timeseries
from ..evaluation import evaluate_predictions
from ..lexicon import Lexicon, ModelParams, dumps_lexicon, induce_lexicon, loads_lexicon
from ..perceptron import (
    PerceptronModel,
    dumps_model,
    forward,
    init_from_lexicon,
    label_to_target,
    loads_model,
    train,
)
from ..scoring import TonalityScore, score_document, score_with_exact_weights
from ..serialization import FormatError
from ..textproc import tokenize
from .schemas import (
    ChannelReportOut,
    ClassifyRequest,
    ConceptRequest,
    EvalReportOut,
    EvaluateRequest,
    HealthOut,
    ImportRequest,
    InduceRequest,
    LexiconInfo,
    ModelInfo,
    ParamOverrides,
    ScoreOut,
    TrainOut,
    TrainRequest,
)


class Registry:
    """Thread-safe id -> object store with a readable id prefix."""

    def __init__(self, prefix: str):
        self._prefix = prefix
        self._lock = threading.Lock()
        self._items: dict[str, object] = {}
        self._next = 1

    def add(self, item: object) -> str:
        with self._lock:
            key = f"{self._prefix}-{self._next}"
            self._next += 1
            self._items[key] = item
        return key

    def get(self, key: str) -> object:
        try:
            return self._items[key]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown id: {key}") from None


def _params(base: ModelParams, overrides: ParamOverrides | None) -> ModelParams:
    if overrides is None:
        return base
    try:
        return overrides.apply(base)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None


def create_app() -> FastAPI:
    app = FastAPI(title="tonality service", version=__version__)
    lexicons = Registry("lex")
    models = Registry("net")

    @app.get("/health", response_model=HealthOut)
    def health() -> HealthOut:
        return HealthOut(status="ok", version=__version__)

    @app.post("/lexicons", response_model=LexiconInfo)
    def induce(request: InduceRequest) -> LexiconInfo:
        params = _params(ModelParams(), request.params)
        positive = [doc.to_record() for doc in request.positive]
        negative = [doc.to_record() for doc in request.negative]
        try:
            lexicon = induce_lexicon(positive, negative, params)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        key = lexicons.add(lexicon)
        return LexiconInfo(
            lexicon_id=key,
            positive_entries=len(lexicon.positive),
            negative_entries=len(lexicon.negative),
        )

    @app.post("/lexicons/import", response_model=LexiconInfo)
    def import_lexicon(request: ImportRequest) -> LexiconInfo:
        try:
            lexicon = loads_lexicon(request.content)
        except FormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        key = lexicons.add(lexicon)
        return LexiconInfo(
            lexicon_id=key,
            positive_entries=len(lexicon.positive),
            negative_entries=len(lexicon.negative),
        )

    @app.get("/lexicons/{lexicon_id}", response_class=Response)
    def export_lexicon(lexicon_id: str) -> Response:
        lexicon = lexicons.get(lexicon_id)
        assert isinstance(lexicon, Lexicon)
        return Response(content=dumps_lexicon(lexicon), media_type="text/plain; charset=utf-8")

    @app.post("/lexicons/{lexicon_id}/classify", response_model=list[ScoreOut])
    def classify(lexicon_id: str, request: ClassifyRequest) -> list[ScoreOut]:
        lexicon = lexicons.get(lexicon_id)
        assert isinstance(lexicon, Lexicon)
        params = _params(lexicon.params, request.params)
        scorer = score_with_exact_weights if request.exact_weights else score_document
        return [
            ScoreOut.from_score(doc.id, scorer(doc.to_record().tokens, lexicon, params))
            for doc in request.documents
        ]

    @app.post("/lexicons/{lexicon_id}/evaluate", response_model=EvalReportOut)
    def evaluate(lexicon_id: str, request: EvaluateRequest) -> EvalReportOut:
        lexicon = lexicons.get(lexicon_id)
        assert isinstance(lexicon, Lexicon)
        params = _params(lexicon.params, request.params)
        pairs = [
            (doc.gold, score_document(doc.to_record().tokens, lexicon, params))
            for doc in request.documents
        ]
        return EvalReportOut.from_report(evaluate_predictions(pairs))

    def _concept_report(lexicon_id: str, request: ConceptRequest):
        lexicon = lexicons.get(lexicon_id)
        assert isinstance(lexicon, Lexicon)
        params = _params(lexicon.params, request.params)
        concept_tokens = tokenize(request.concept).tokens
        if not concept_tokens:
            raise HTTPException(status_code=422, detail="concept yields no tokens")
        bucket = (
            timedelta(seconds=request.bucket_seconds)
            if request.bucket_seconds is not None
            else None
        )
        try:
            return channel_report(
                [doc.to_record() for doc in request.documents],
                concept_tokens,
                lexicon,
                params,
                request.granularity,
                request.window_radius,
                bucket,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

    @app.post("/lexicons/{lexicon_id}/concept", response_model=ChannelReportOut)
    def concept(lexicon_id: str, request: ConceptRequest) -> ChannelReportOut:
        return ChannelReportOut.from_report(_concept_report(lexicon_id, request))

    @app.post("/lexicons/{lexicon_id}/concept/timeseries", response_class=Response)
    def concept_timeseries(
        lexicon_id: str, request: ConceptRequest, fmt: Literal["csv", "svg"] = "csv"
    ) -> Response:
        report = _concept_report(lexicon_id, request)
        try:
            payload = render_timeseries(report, fmt)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        media = "text/csv; charset=utf-8" if fmt == "csv" else "image/svg+xml"
        return Response(content=payload, media_type=media)

    @app.post("/lexicons/{lexicon_id}/train", response_model=TrainOut)
    def train_model(lexicon_id: str, request: TrainRequest) -> TrainOut:
        lexicon = lexicons.get(lexicon_id)
        assert isinstance(lexicon, Lexicon)
        params = _params(lexicon.params, request.params)
        model = init_from_lexicon(lexicon, params)
        dataset = [
            (doc.to_record().tokens, label_to_target(doc.gold)) for doc in request.documents
        ]
        try:
            result = train(
                model,
                dataset,
                epochs=request.epochs,
                learning_rate=request.learning_rate,
                shuffle_seed=request.seed,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        key = models.add(result.model)
        return TrainOut(model_id=key, epoch_mean_loss=list(result.epoch_mean_loss))

    @app.post("/models/import", response_model=ModelInfo)
    def import_model(request: ImportRequest) -> ModelInfo:
        try:
            model = loads_model(request.content)
        except FormatError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        key = models.add(model)
        return ModelInfo(model_id=key, vocab_size=len(model.vocab))

    @app.get("/models/{model_id}", response_class=Response)
    def export_model(model_id: str) -> Response:
        model = models.get(model_id)
        assert isinstance(model, PerceptronModel)
        return Response(content=dumps_model(model), media_type="text/plain; charset=utf-8")

    @app.post("/models/{model_id}/classify", response_model=list[ScoreOut])
    def classify_with_model(model_id: str, request: ClassifyRequest) -> list[ScoreOut]:
        model = models.get(model_id)
        assert isinstance(model, PerceptronModel)
        params = _params(model.params, request.params)
        if params is not model.params:
            model = PerceptronModel(model.vocab, model.w_pos, model.w_neg, params)
        scored = []
        for doc in request.documents:
            trace = forward(model, doc.to_record().tokens)
            scored.append(
                ScoreOut.from_score(
                    doc.id, TonalityScore.from_outputs(trace.out_pos, trace.out_neg, params)
                )
            )
        return scored

    return app


app = create_app()
