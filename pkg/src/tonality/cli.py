"""Command-line surface: lexicon induction, classification, evaluation,
perceptron training, and concept channel reports.

Exit codes: 0 success, 1 I/O failure, 2 usage/validation error, 3 partial
failure (some input records were skipped).
"""
from __future__ import annotations

import json
import re
import sys
from datetime import timedelta
from pathlib import Path

import click

from .channel import GRANULARITIES, channel_report, render_timeseries
from .documents import DocumentRecord, document_from_json, format_timestamp, iter_jsonl
from .evaluation import evaluate_predictions, report_json_dict, report_text
from .lexicon import Lexicon, ModelParams, induce_lexicon, load_lexicon, save_lexicon
from .perceptron import (
    PerceptronModel,
    init_from_lexicon,
    label_to_target,
    load_model,
    save_model,
    train,
)
from .scoring import Label, TonalityScore, score_document
from .serialization import FormatError
from .textproc import tokenize

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3

_DURATION_RE = re.compile(r"(\d+)([smhdw])")
_DURATION_SECONDS = {"s": 1, "m": 60, "h": 3600, "d": 86400, "w": 604800}

_PARAM_FLAGS = (
    ("--alpha", "alpha", "uniform word weight"),
    ("--lambda", "lam", "prior odds ratio of the competing hypothesis"),
    ("--beta", "beta", "decision threshold on the score difference"),
    ("--gamma", "gamma", "negative evidence attenuation"),
    ("--tau", "tau_expressive", "expressiveness threshold"),
    ("--floor", "weight_floor", "minimum weight to admit a word"),
    ("--band", "exclusion_band", "ignored weight band around 0.5"),
)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def param_options(command):
    """Attach the model parameter override flags to a command."""
    for flag, name, help_text in reversed(_PARAM_FLAGS):
        command = click.option(flag, name, type=float, default=None, help=help_text)(command)
    return command


def _effective_params(base: ModelParams, flags: dict) -> ModelParams:
    try:
        return base.override(**flags)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))


def _params_header(params: ModelParams) -> str:
    return (
        f"# params alpha={params.alpha!r} lambda={params.lam!r} beta={params.beta!r} "
        f"gamma={params.gamma!r} tau={params.tau_expressive!r} "
        f"floor={params.weight_floor!r} band={params.exclusion_band!r}"
    )


def _load_lexicon(path: str) -> Lexicon:
    try:
        return load_lexicon(path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read lexicon {path}: {exc}")
    except FormatError as exc:
        _fail(EXIT_USAGE, f"bad lexicon {path}: {exc}")


def _load_model(path: str) -> PerceptronModel:
    try:
        return load_model(path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read model {path}: {exc}")
    except FormatError as exc:
        _fail(EXIT_USAGE, f"bad model {path}: {exc}")


def _open_input(path: str):
    try:
        return click.open_file(path, "r", encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {path}: {exc}")


def _read_corpus(path: str) -> list[DocumentRecord]:
    """A corpus is a directory of text files (one document each) or a JSONL file."""
    root = Path(path)
    if not root.exists():
        _fail(EXIT_IO, f"no such path: {path}")
    docs: list[DocumentRecord] = []
    if root.is_dir():
        for child in sorted(p for p in root.iterdir() if p.is_file()):
            try:
                text = child.read_text(encoding="utf-8")
            except OSError as exc:
                _fail(EXIT_IO, f"cannot read {child}: {exc}")
            except UnicodeDecodeError as exc:
                _fail(EXIT_USAGE, f"{child}: not valid UTF-8: {exc}")
            docs.append(DocumentRecord(id=child.name, text=text))
        return docs
    with _open_input(path) as stream:
        for doc, _ in _read_jsonl(stream, label=path, require_gold=False):
            docs.append(doc)
    return docs


def _read_jsonl(stream, label: str, require_gold: bool) -> list[tuple[DocumentRecord, Label | None]]:
    """Strictly parse a JSONL document stream; any bad line is a usage error."""
    records: list[tuple[DocumentRecord, Label | None]] = []
    for lineno, line in iter_jsonl(stream):
        try:
            obj = json.loads(line)
            doc = document_from_json(obj)
        except ValueError as exc:
            _fail(EXIT_USAGE, f"{label}: line {lineno}: {exc}")
        gold = None
        if require_gold:
            raw = obj.get("gold")
            if raw is None:
                _fail(EXIT_USAGE, f"{label}: line {lineno}: missing 'gold' label")
            try:
                gold = Label(str(raw).lower())
            except ValueError:
                _fail(EXIT_USAGE, f"{label}: line {lineno}: unknown gold label {raw!r}")
        records.append((doc, gold))
    return records


def _parse_duration(raw: str) -> timedelta:
    match = _DURATION_RE.fullmatch(raw.strip())
    if not match:
        _fail(EXIT_USAGE, f"invalid duration {raw!r} (use e.g. 45s, 30m, 12h, 1d, 2w)")
    return timedelta(seconds=int(match.group(1)) * _DURATION_SECONDS[match.group(2)])


def _score_row(doc_id: str, score: TonalityScore) -> str:
    flag = "true" if score.expressive else "false"
    return (
        f"{doc_id}\t{score.out_pos:.6f}\t{score.out_neg:.6f}\t{score.delta:.6f}"
        f"\t{score.label.value}\t{flag}"
    )


def _score_json(doc_id: str, score: TonalityScore) -> str:
    return json.dumps(
        {
            "id": doc_id,
            "out_pos": score.out_pos,
            "out_neg": score.out_neg,
            "delta": score.delta,
            "label": score.label.value,
            "expressive": score.expressive,
        },
        ensure_ascii=False,
    )


@click.group()
def main() -> None:
    """Tonality analysis toolkit."""


@main.command("build-lexicon")
@click.option("--pos", "pos_path", required=True, type=click.Path(),
              help="positive corpus: directory of text files or a JSONL file")
@click.option("--neg", "neg_path", required=True, type=click.Path(),
              help="negative corpus: directory of text files or a JSONL file")
@click.option("--out", "out_path", required=True, type=click.Path(), help="output TONALEX file")
@param_options
def build_lexicon_cmd(pos_path: str, neg_path: str, out_path: str, **flags) -> None:
    """Induce a weighted tonal lexicon from two labeled corpora."""
    positive = _read_corpus(pos_path)
    negative = _read_corpus(neg_path)
    if not positive:
        _fail(EXIT_USAGE, f"empty corpus: {pos_path}")
    if not negative:
        _fail(EXIT_USAGE, f"empty corpus: {neg_path}")
    params = _effective_params(ModelParams(), flags)
    lexicon = induce_lexicon(positive, negative, params)
    try:
        save_lexicon(lexicon, out_path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out_path}: {exc}")
    click.echo(_params_header(params))
    click.echo(f"positive entries: {len(lexicon.positive)}")
    click.echo(f"negative entries: {len(lexicon.negative)}")
    if not lexicon.positive and not lexicon.negative:
        click.echo("warning: induced lexicon is empty (corpora are indistinguishable)", err=True)


@main.command()
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path())
@click.option("--in", "in_path", default="-", show_default=True,
              help="input file, or '-' for standard input")
@click.option("--format", "fmt", type=click.Choice(["text", "jsonl"]), default="jsonl",
              show_default=True, help="text: whole input is one document; jsonl: one per line")
@param_options
def classify(lexicon_path: str, in_path: str, fmt: str, **flags) -> None:
    """Classify documents against a lexicon."""
    lexicon = _load_lexicon(lexicon_path)
    params = _effective_params(lexicon.params, flags)
    with _open_input(in_path) as stream:
        if fmt == "text":
            doc_id = "stdin" if in_path == "-" else in_path
            score = score_document(tokenize(stream.read()), lexicon, params)
            click.echo(_params_header(params))
            click.echo("# id\tout_pos\tout_neg\tdelta\tlabel\texpressive")
            click.echo(_score_row(doc_id, score))
            return
        click.echo(_params_header(params), err=True)
        failures = 0
        for lineno, line in iter_jsonl(stream):
            try:
                doc = document_from_json(json.loads(line))
            except ValueError as exc:
                click.echo(f"error: line {lineno}: {exc}", err=True)
                failures += 1
                continue
            score = score_document(doc.tokens, lexicon, params)
            click.echo(_score_json(doc.id, score))
    if failures:
        sys.exit(EXIT_PARTIAL)


@main.command()
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path())
@click.option("--test", "test_path", required=True, type=click.Path(),
              help="gold-labeled JSONL ({id, text, gold, timestamp?})")
@param_options
def evaluate(lexicon_path: str, test_path: str, **flags) -> None:
    """Evaluate classification against gold labels."""
    lexicon = _load_lexicon(lexicon_path)
    params = _effective_params(lexicon.params, flags)
    with _open_input(test_path) as stream:
        records = _read_jsonl(stream, label=test_path, require_gold=True)
    if not records:
        _fail(EXIT_USAGE, f"empty test set: {test_path}")
    pairs = [(gold, score_document(doc.tokens, lexicon, params)) for doc, gold in records]
    report = evaluate_predictions(pairs)
    click.echo(_params_header(params))
    click.echo(report_text(report))
    click.echo(json.dumps(report_json_dict(report), ensure_ascii=False))


@main.command("train")
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path())
@click.option("--data", "data_path", required=True, type=click.Path(),
              help="gold-labeled JSONL training data")
@click.option("--out", "out_path", required=True, type=click.Path(), help="output TONALNET file")
@click.option("--model", "model_path", default=None, type=click.Path(),
              help="resume from an existing TONALNET file instead of lexicon init")
@click.option("--epochs", default=10, show_default=True, type=click.IntRange(min=0))
@click.option("--lr", default=0.1, show_default=True, type=click.FloatRange(min=0))
@click.option("--seed", default=None, type=int,
              help="reshuffle presentation order per epoch with this seed")
@param_options
def train_cmd(lexicon_path: str, data_path: str, out_path: str, model_path: str | None,
              epochs: int, lr: float, seed: int | None, **flags) -> None:
    """Train the perceptron's synapse weights by stochastic gradient descent."""
    lexicon = _load_lexicon(lexicon_path)
    if model_path is not None:
        base = _load_model(model_path)
        params = _effective_params(base.params, flags)
        model = PerceptronModel(base.vocab, base.w_pos, base.w_neg, params)
    else:
        params = _effective_params(lexicon.params, flags)
        model = init_from_lexicon(lexicon, params)
    with _open_input(data_path) as stream:
        records = _read_jsonl(stream, label=data_path, require_gold=True)
    if not records:
        _fail(EXIT_USAGE, f"empty training set: {data_path}")
    dataset = [(doc.tokens, label_to_target(gold)) for doc, gold in records]
    result = train(model, dataset, epochs=epochs, learning_rate=lr, shuffle_seed=seed)
    click.echo(_params_header(params))
    for epoch, loss in enumerate(result.epoch_mean_loss, start=1):
        click.echo(f"epoch {epoch}: mean_loss={loss:.6f}")
    try:
        save_model(result.model, out_path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out_path}: {exc}")
    click.echo(f"wrote model: {out_path}")


@main.command()
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path())
@click.option("--concept", "concept_phrase", required=True, help="concept word or phrase")
@click.option("--in", "in_path", default="-", show_default=True,
              help="JSONL documents, or '-' for standard input")
@click.option("--granularity", type=click.Choice(GRANULARITIES), default="document",
              show_default=True)
@click.option("--window-radius", default=5, show_default=True, type=click.IntRange(min=1),
              help="token radius for --granularity window")
@click.option("--bucket", "bucket_arg", default=None,
              help="time bucket width for the trend series, e.g. 1d, 12h, 30m")
@click.option("--out-csv", "out_csv", default=None, type=click.Path(),
              help="write the bucketed series as CSV")
@click.option("--out-svg", "out_svg", default=None, type=click.Path(),
              help="write the bucketed series as a stacked bar SVG")
@param_options
def concept(lexicon_path: str, concept_phrase: str, in_path: str, granularity: str,
            window_radius: int, bucket_arg: str | None, out_csv: str | None,
            out_svg: str | None, **flags) -> None:
    """Report channel tonality for a concept, optionally bucketed over time."""
    lexicon = _load_lexicon(lexicon_path)
    params = _effective_params(lexicon.params, flags)
    concept_tokens = tokenize(concept_phrase).tokens
    if not concept_tokens:
        _fail(EXIT_USAGE, f"concept {concept_phrase!r} yields no tokens")
    with _open_input(in_path) as stream:
        docs = [doc for doc, _ in _read_jsonl(stream, label=in_path, require_gold=False)]
    if not docs:
        _fail(EXIT_USAGE, "no input documents")
    bucket = _parse_duration(bucket_arg) if bucket_arg is not None else None
    try:
        report = channel_report(docs, concept_tokens, lexicon, params,
                                granularity, window_radius, bucket)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    click.echo(_params_header(params))
    click.echo(f"concept: {' '.join(report.concept)}")
    click.echo(f"documents: {len(report.per_document)}")
    c = report.counts
    click.echo(f"positive: {c.positive}  negative: {c.negative}  neutral: {c.neutral}"
               f"  expressive: {c.expressive}")
    click.echo(f"integral: {report.integral_label.value}")
    if report.buckets is not None:
        for b in report.buckets:
            click.echo(f"{format_timestamp(b.start)}  positive={b.positive}"
                       f" negative={b.negative} neutral={b.neutral}")
    for target, fmt in ((out_csv, "csv"), (out_svg, "svg")):
        if target is None:
            continue
        try:
            payload = render_timeseries(report, fmt)
        except ValueError as exc:
            _fail(EXIT_USAGE, str(exc))
        try:
            Path(target).write_bytes(payload)
        except OSError as exc:
            _fail(EXIT_IO, f"cannot write {target}: {exc}")
        click.echo(f"wrote {fmt}: {target}")


if __name__ == "__main__":  # pragma: no cover
    main()
