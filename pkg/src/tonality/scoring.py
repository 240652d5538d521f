"""Naive-Bayes tonality scoring.

The combiner is the Graham-style product rule from Bayesian spam filtering:
given per-word weights ``w_i`` (each the probability that a document carrying
word ``i`` has the target tone) and a prior odds ratio ``lam``, the combined
score is ``prod(w) / (prod(w) + lam * prod(1 - w))``. It is evaluated in
log-odds space so a 200-word document cannot underflow.

With a single uniform weight ``alpha`` and ``x`` matched words the score
collapses to a logistic in ``x`` with slope ``ln(alpha / (1 - alpha))`` and
bias ``-ln(lam)``; that closed form also serves as the neuron conductance in
:mod:`tonality.perceptron`.

A document is scored once against the positive word map and once against the
negative map; the negative evidence count is scaled by ``gamma`` in (0, 1],
discounting negative matches relative to positive ones. The difference of the
two scores is thresholded at ``beta`` into positive / negative / neutral, and
a neutral document scoring high on both sides is flagged as expressive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .lexicon import Lexicon, ModelParams
from .textproc import TokenSet


class Label(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class TonalityScore:
    """Both polarity scores, their difference, and the discrete decision."""

    out_pos: float
    out_neg: float
    delta: float
    label: Label
    expressive: bool

    @classmethod
    def from_outputs(cls, out_pos: float, out_neg: float, params: ModelParams) -> "TonalityScore":
        delta = out_pos - out_neg
        label = decide_label(delta, params.beta)
        expressive = (
            label is Label.NEUTRAL
            and out_pos >= params.tau_expressive
            and out_neg >= params.tau_expressive
        )
        return cls(out_pos, out_neg, delta, label, expressive)


def decide_label(delta: float, beta: float) -> Label:
    """Positive above ``beta``, negative below ``-beta``, neutral between."""
    if delta > beta:
        return Label.POSITIVE
    if delta < -beta:
        return Label.NEGATIVE
    return Label.NEUTRAL


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def log_odds(weight: float) -> float:
    """``ln(w / (1 - w))``; rejects the degenerate certainties 0 and 1."""
    if not 0.0 < weight < 1.0:
        raise ValueError(f"weight must be strictly inside (0, 1), got {weight}")
    return math.log(weight) - math.log1p(-weight)


def _check_lam(lam: float) -> None:
    if not lam > 0.0 or not math.isfinite(lam):
        raise ValueError(f"lambda must be a positive finite number, got {lam}")


def bayes_posterior(p_given: float, p_given_not: float, lam: float) -> float:
    """Posterior of the hypothesis given one piece of evidence.

    ``p_given`` and ``p_given_not`` are the evidence likelihoods under the
    hypothesis and its complement; ``lam`` is the prior odds of the
    complement.
    """
    _check_lam(lam)
    for name, p in (("p_given", p_given), ("p_given_not", p_given_not)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {p}")
    if p_given == 0.0 and p_given_not == 0.0:
        raise ValueError("undefined evidence: both conditional probabilities are zero")
    return p_given / (p_given + lam * p_given_not)


def combine_weights(weights: Iterable[float], lam: float) -> float:
    """Combine independent per-word weights into one posterior (log-space).

    An empty list carries no evidence and returns the prior ``1 / (1 + lam)``.
    """
    _check_lam(lam)
    z = math.fsum(log_odds(w) for w in weights) - math.log(lam)
    return _sigmoid(z)


def combine_uniform(x: float, alpha: float, lam: float) -> float:
    """Evidence score for ``x`` words of uniform weight ``alpha``.

    Equals ``alpha**x / (alpha**x + lam * (1 - alpha)**x)``, computed as the
    logistic ``1 / (1 + lam * exp(-x * ln(alpha / (1 - alpha))))``. ``x`` may
    be fractional (the attenuated negative count is).
    """
    if not x >= 0.0 or not math.isfinite(x):
        raise ValueError(f"x must be a finite non-negative number, got {x}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    _check_lam(lam)
    return _sigmoid(x * log_odds(alpha) - math.log(lam))


def score_document(tokens: TokenSet, lexicon: Lexicon, params: ModelParams | None = None) -> TonalityScore:
    """Score a document by its counts of distinct tonal words.

    ``x+`` and ``x-`` are the numbers of distinct positive / negative lexicon
    words present; the negative count is scaled by ``gamma`` before entering
    the uniform-weight score.
    """
    params = params if params is not None else lexicon.params
    x_pos = len(tokens.types & lexicon.positive.keys())
    x_neg = len(tokens.types & lexicon.negative.keys())
    out_pos = combine_uniform(float(x_pos), params.alpha, params.lam)
    out_neg = combine_uniform(params.gamma * x_neg, params.alpha, params.lam)
    return TonalityScore.from_outputs(out_pos, out_neg, params)


def score_with_exact_weights(
    tokens: TokenSet, lexicon: Lexicon, params: ModelParams | None = None
) -> TonalityScore:
    """Score a document using each matched entry's own weight.

    The positive side combines the matched positive weights directly. On the
    negative side the attenuation acts in log-odds space (each weight's
    log-odds scaled by ``gamma``), so with all weights equal to ``alpha`` this
    reduces exactly to :func:`score_document`.
    """
    params = params if params is not None else lexicon.params
    pos_words = sorted(tokens.types & lexicon.positive.keys())
    neg_words = sorted(tokens.types & lexicon.negative.keys())
    out_pos = combine_weights((lexicon.positive[w].weight for w in pos_words), params.lam)
    z_neg = params.gamma * math.fsum(log_odds(lexicon.negative[w].weight) for w in neg_words)
    out_neg = _sigmoid(z_neg - math.log(params.lam))
    return TonalityScore.from_outputs(out_pos, out_neg, params)
