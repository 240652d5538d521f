"""Tonality analysis: lexicon-based positive/negative/neutral classification.

Core pieces: a tokenizer and fragment extractor (:mod:`tonality.textproc`),
weighted word-list induction and persistence (:mod:`tonality.lexicon`), the
naive-Bayes scorer (:mod:`tonality.scoring`), an equivalent trainable
two-layer perceptron (:mod:`tonality.perceptron`), concept/channel
aggregation with time-series rendering (:mod:`tonality.channel`), an
evaluation harness, a click CLI, and a FastAPI service
(:mod:`tonality.service`).
"""

from .channel import (
    ChannelCounts,
    ChannelReport,
    TimeBucket,
    channel_report,
    concept_tonality,
    no_evidence_score,
    render_timeseries,
)
from .documents import DocumentRecord, format_timestamp, parse_timestamp
from .evaluation import EvalReport, evaluate_predictions, report_json_dict, report_text
from .lexicon import (
    Lexicon,
    LexiconEntry,
    ModelParams,
    Provenance,
    dumps_lexicon,
    estimate_word_weight,
    induce_lexicon,
    load_lexicon,
    loads_lexicon,
    save_lexicon,
)
from .perceptron import (
    ForwardTrace,
    PerceptronModel,
    TrainResult,
    dumps_model,
    forward,
    gradient,
    init_from_lexicon,
    label_to_target,
    load_model,
    loads_model,
    save_model,
    train,
)
from .scoring import (
    Label,
    TonalityScore,
    bayes_posterior,
    combine_uniform,
    combine_weights,
    log_odds,
    score_document,
    score_with_exact_weights,
)
from .serialization import FormatError
from .textproc import (
    Fragment,
    TokenSet,
    extract_concept_fragments,
    split_paragraphs,
    split_sentences,
    tokenize,
    tokenize_with_spans,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelCounts",
    "ChannelReport",
    "DocumentRecord",
    "EvalReport",
    "FormatError",
    "ForwardTrace",
    "Fragment",
    "Label",
    "Lexicon",
    "LexiconEntry",
    "ModelParams",
    "PerceptronModel",
    "Provenance",
    "TimeBucket",
    "TokenSet",
    "TonalityScore",
    "TrainResult",
    "bayes_posterior",
    "channel_report",
    "combine_uniform",
    "combine_weights",
    "concept_tonality",
    "dumps_lexicon",
    "dumps_model",
    "estimate_word_weight",
    "evaluate_predictions",
    "extract_concept_fragments",
    "format_timestamp",
    "forward",
    "gradient",
    "induce_lexicon",
    "init_from_lexicon",
    "label_to_target",
    "load_lexicon",
    "load_model",
    "loads_lexicon",
    "loads_model",
    "log_odds",
    "no_evidence_score",
    "parse_timestamp",
    "render_timeseries",
    "report_json_dict",
    "report_text",
    "save_lexicon",
    "save_model",
    "score_document",
    "score_with_exact_weights",
    "split_paragraphs",
    "split_sentences",
    "tokenize",
    "tokenize_with_spans",
    "train",
]
