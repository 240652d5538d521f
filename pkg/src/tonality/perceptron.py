"""Two-layer perceptron realization of the lexicon scorer.

The first layer holds one positive and one negative neuron. Inputs are
word-presence indicators over a fixed vocabulary; the adders compute the
weighted sums ``NET+`` and ``NET-`` and the conductance maps them through
:func:`tonality.scoring.combine_uniform` (the negative argument scaled by
``gamma``). The second layer outputs the difference of the two conductances,
which the decision threshold turns into a label.

Initialized from a lexicon with unit synapse weights, the forward pass
reproduces :func:`tonality.scoring.score_document` bit-for-bit; training
adjusts the first-layer weights by stochastic gradient descent on the squared
error of the difference against targets in [-1, 1], clamping the weights to
stay non-negative so the adders keep their weighted-word-count meaning.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property
from os import PathLike
from typing import IO, Sequence

import numpy as np

from .lexicon import Lexicon, ModelParams, parse_params_items, render_params_lines
from .scoring import Label, combine_uniform, decide_label, log_odds
from .serialization import FormatError, check_word, format_float, parse_float, split_kv
from .textproc import TokenSet

MODEL_HEADER = "TONALNET 1"

_TARGETS = {Label.POSITIVE: 1.0, Label.NEGATIVE: -1.0, Label.NEUTRAL: 0.0}


def label_to_target(label: Label) -> float:
    """Training target encoding: positive -> +1, negative -> -1, neutral -> 0."""
    return _TARGETS[label]


@dataclass(eq=False)
class PerceptronModel:
    """Vocabulary plus per-word synapse weights for both first-layer neurons."""

    vocab: tuple[str, ...]
    w_pos: np.ndarray
    w_neg: np.ndarray
    params: ModelParams

    def __post_init__(self):
        self.vocab = tuple(self.vocab)
        self.w_pos = np.asarray(self.w_pos, dtype=np.float64)
        self.w_neg = np.asarray(self.w_neg, dtype=np.float64)
        if len(set(self.vocab)) != len(self.vocab):
            raise ValueError("vocab contains duplicate words")
        for name, w in (("w_pos", self.w_pos), ("w_neg", self.w_neg)):
            if w.shape != (len(self.vocab),):
                raise ValueError(f"{name} must have one weight per vocab word")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise ValueError(f"{name} must be finite and non-negative")

    @cached_property
    def index(self) -> dict[str, int]:
        return {word: i for i, word in enumerate(self.vocab)}

    def copy(self) -> "PerceptronModel":
        return PerceptronModel(self.vocab, self.w_pos.copy(), self.w_neg.copy(), self.params)

    def active_indices(self, tokens: TokenSet) -> list[int]:
        """Vocab indices of the distinct words present in ``tokens``.

        Ordered by word, not by index, so sums are bit-identical across
        models that merely permute the vocabulary.
        """
        index = self.index
        return [index[w] for w in sorted(tokens.types & index.keys())]


@dataclass(frozen=True)
class ForwardTrace:
    """Adder sums, conductance outputs, and the second-layer decision."""

    net_pos: float
    net_neg: float
    out_pos: float
    out_neg: float
    delta: float
    label: Label


@dataclass(frozen=True)
class TrainResult:
    model: "PerceptronModel"
    epoch_mean_loss: tuple[float, ...]


def init_from_lexicon(lexicon: Lexicon, params: ModelParams | None = None) -> PerceptronModel:
    """Unit-initialize synapse weights from lexicon membership."""
    params = params if params is not None else lexicon.params
    vocab = tuple(sorted(lexicon.positive.keys() | lexicon.negative.keys()))
    w_pos = np.array([1.0 if w in lexicon.positive else 0.0 for w in vocab])
    w_neg = np.array([1.0 if w in lexicon.negative else 0.0 for w in vocab])
    return PerceptronModel(vocab, w_pos, w_neg, params)


def forward(model: PerceptronModel, tokens: TokenSet) -> ForwardTrace:
    """Run the network on a document's word-presence indicators."""
    params = model.params
    active = model.active_indices(tokens)
    net_pos = float(model.w_pos[active].sum()) if active else 0.0
    net_neg = float(model.w_neg[active].sum()) if active else 0.0
    out_pos = combine_uniform(net_pos, params.alpha, params.lam)
    out_neg = combine_uniform(params.gamma * net_neg, params.alpha, params.lam)
    delta = out_pos - out_neg
    return ForwardTrace(net_pos, net_neg, out_pos, out_neg, delta, decide_label(delta, params.beta))


def gradient(
    model: PerceptronModel, tokens: TokenSet, target: float
) -> tuple[np.ndarray, np.ndarray, float]:
    """Analytic gradient of the squared-error loss on the output difference.

    Loss is ``(delta - target)**2 / 2``. With ``r = ln(alpha / (1 - alpha))``
    the conductance derivative is ``r * out * (1 - out)``, scaled by ``gamma``
    and negated on the negative side, and masked by word presence.
    """
    trace = forward(model, tokens)
    params = model.params
    err = trace.delta - target
    loss = 0.5 * err * err
    r = log_odds(params.alpha)
    g_pos = np.zeros(len(model.vocab))
    g_neg = np.zeros(len(model.vocab))
    active = model.active_indices(tokens)
    if active:
        g_pos[active] = err * r * trace.out_pos * (1.0 - trace.out_pos)
        g_neg[active] = -err * params.gamma * r * trace.out_neg * (1.0 - trace.out_neg)
    return g_pos, g_neg, loss


def train(
    model: PerceptronModel,
    dataset: Sequence[tuple[TokenSet, float]],
    epochs: int,
    learning_rate: float,
    shuffle_seed: int | None = None,
) -> TrainResult:
    """Stochastic gradient descent over ``dataset`` in presentation order.

    Weights are clamped to stay non-negative after every update. Without a
    ``shuffle_seed`` the presentation order is the dataset order, so the run
    is deterministic; with a seed the order is reshuffled per epoch by a
    dedicated RNG, deterministic for a given seed.
    """
    if not dataset:
        raise ValueError("dataset must be non-empty")
    if learning_rate < 0:
        raise ValueError("learning_rate must be non-negative")
    if epochs < 0:
        raise ValueError("epochs must be non-negative")
    for _, target in dataset:
        if not -1.0 <= target <= 1.0:
            raise ValueError(f"target must be in [-1, 1], got {target}")

    work = model.copy()
    order = list(range(len(dataset)))
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    losses = []
    for _ in range(epochs):
        if rng is not None:
            rng.shuffle(order)
        total = 0.0
        for i in order:
            tokens, target = dataset[i]
            g_pos, g_neg, loss = gradient(work, tokens, target)
            total += loss
            if learning_rate:
                work.w_pos = np.maximum(work.w_pos - learning_rate * g_pos, 0.0)
                work.w_neg = np.maximum(work.w_neg - learning_rate * g_neg, 0.0)
        losses.append(total / len(dataset))
    return TrainResult(work, tuple(losses))


def dumps_model(model: PerceptronModel) -> str:
    """Serialize to the TONALNET text format (vocab order preserved)."""
    lines = [MODEL_HEADER]
    for word, wp, wn in zip(model.vocab, model.w_pos, model.w_neg):
        lines.append(f"{word}\t{format_float(wp)}\t{format_float(wn)}")
    lines.append("PARAMS")
    lines.extend(render_params_lines(model.params))
    return "\n".join(lines) + "\n"


def save_model(model: PerceptronModel, destination: str | PathLike | IO[str]) -> None:
    text = dumps_model(model)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def loads_model(text: str) -> PerceptronModel:
    """Parse TONALNET content; malformed input raises :class:`FormatError`."""
    lines = text.splitlines()
    if not lines or lines[0] != MODEL_HEADER:
        found = lines[0] if lines else "<empty file>"
        raise FormatError(f"expected header {MODEL_HEADER!r}, found {found!r}", 1)
    vocab: list[str] = []
    w_pos: list[float] = []
    w_neg: list[float] = []
    seen: set[str] = set()
    kv_items: list[tuple[int, str, str]] = []
    in_params = False
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line == "PARAMS":
            if in_params:
                raise FormatError("duplicate PARAMS section", lineno)
            in_params = True
            continue
        if in_params:
            key, value = split_kv(line, lineno)
            kv_items.append((lineno, key, value))
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 tab-separated fields, got {len(fields)}", lineno)
        word = check_word(fields[0], lineno)
        if word in seen:
            raise FormatError(f"duplicate word {word!r}", lineno)
        seen.add(word)
        wp = parse_float(fields[1], lineno)
        wn = parse_float(fields[2], lineno)
        if not (math.isfinite(wp) and math.isfinite(wn)) or wp < 0 or wn < 0:
            raise FormatError("synapse weights must be finite and non-negative", lineno)
        vocab.append(word)
        w_pos.append(wp)
        w_neg.append(wn)
    if not in_params:
        raise FormatError("missing PARAMS section", len(lines))
    params, _, _ = parse_params_items(kv_items)
    return PerceptronModel(tuple(vocab), np.array(w_pos), np.array(w_neg), params)


def load_model(source: str | PathLike | IO[str]) -> PerceptronModel:
    """Read a TONALNET file from a path or text stream."""
    if hasattr(source, "read"):
        return loads_model(source.read())
    with open(source, "r", encoding="utf-8") as fh:
        return loads_model(fh.read())
