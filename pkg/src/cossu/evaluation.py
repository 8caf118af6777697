"""Experiment machinery: planted-rule synthesis, hit rate, next-element
prediction with abstention, baselines, and the compression classifier."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .encoding import (
    Model,
    _aligned_ids,
    _match_end_indices,
    data_code_length,
    position_distributions,
    predictive_distribution,
)
from .rules import Rule
from .selector import MiningConfig, cossu_mine
from .sequence import Alphabet, Sequence

DEFAULT_TAUS = tuple(round(0.05 * i, 2) for i in range(20))


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a random sequence with planted sequential rules.

    The base draw is i.i.d. from the symbol distribution; after every
    antecedent match in the base draw the rule's consequent is inserted
    with probability `insertion_probability`, then the result is truncated
    back to `length` elements.
    """

    length: int = 5000
    alphabet: tuple[str, ...] = ("A", "B", "C", "D", "E")
    distribution: Mapping[str, float] | None = None
    rules: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = (
        (("A",), ("B",)),
    )
    insertion_probability: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("length must be positive")
        if not 0.0 <= self.insertion_probability <= 1.0:
            raise ValueError("insertion probability must lie in [0, 1]")
        if self.distribution is not None:
            missing = set(self.distribution) - set(self.alphabet)
            if missing or set(self.alphabet) - set(self.distribution):
                raise ValueError("distribution must cover the alphabet")
            total = sum(self.distribution.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError("distribution must sum to 1")


def synth_generate(spec: SyntheticSpec) -> tuple[Sequence, tuple[Rule, ...]]:
    """Generate a sequence per the spec; deterministic for a fixed seed.

    Rules are applied in listed order against the base draw only, so an
    inserted consequent never spawns further antecedent matches. Returns
    the sequence together with the planted rules interned over its
    alphabet.
    """
    alphabet = Alphabet(spec.alphabet)
    k = len(alphabet)
    if spec.distribution is None:
        probs = np.full(k, 1.0 / k)
    else:
        probs = np.array(
            [spec.distribution[alphabet.token_of(i)] for i in range(k)]
        )
        probs = probs / probs.sum()
    targets = tuple(
        Rule.from_tokens(alphabet, ant, cons) for ant, cons in spec.rules
    )

    rng = np.random.default_rng(spec.seed)
    base = rng.choice(k, size=spec.length, p=probs).astype(np.int64)

    ip = spec.insertion_probability
    insertions: dict[int, list[tuple[int, ...]]] = {}
    for rule in targets:
        ant = rule.antecedent
        if ant:
            ends = _match_end_indices(base, ant)
        else:
            ends = np.arange(spec.length)
        for e in ends:
            if rng.random() < ip:
                insertions.setdefault(int(e), []).append(rule.consequent)

    out: list[int] = []
    for idx in range(spec.length):
        out.append(int(base[idx]))
        for cons in insertions.get(idx, ()):
            out.extend(cons)
    return Sequence(alphabet, tuple(out[: spec.length])), targets


def hit_rate(
    models: Iterable[Model],
    targets: Iterable[Rule],
    alphabet: Alphabet,
) -> float:
    """Percentage of models whose proper rule set equals the target set.

    Exact set equality on (antecedent, consequent) token pairs; weights
    are ignored.
    """
    models = list(models)
    if not models:
        raise ValueError("no models to evaluate")
    wanted = {r.tokens(alphabet) for r in targets}
    hits = sum(
        1
        for m in models
        if {r.tokens(m.alphabet) for r in m.non_singletons()} == wanted
    )
    return 100.0 * hits / len(models)


def predict_next(
    m: Model, history: Sequence | tuple[int, ...], tau: float
) -> int | None:
    """Most probable next symbol id, or None when below the threshold.

    Ties break toward the canonically first symbol.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    dist = predictive_distribution(m, history)
    best = int(np.argmax(dist))
    return best if dist[best] > tau else None


@dataclass(frozen=True)
class ThresholdMetrics:
    tau: float
    predicted: int
    correct: int
    total: int

    @property
    def precision(self) -> float:
        return self.correct / self.predicted if self.predicted else 0.0

    @property
    def recall(self) -> float:
        """Share of events for which a prediction was ventured."""
        return self.predicted / self.total if self.total else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class PredictionOutcome:
    metrics: tuple[ThresholdMetrics, ...]
    roc_points: tuple[tuple[float, float], ...]  # (recall, precision)
    auc: float

    def at(self, tau: float) -> ThresholdMetrics:
        for tm in self.metrics:
            if abs(tm.tau - tau) < 1e-12:
                return tm
        raise KeyError(f"no metrics for threshold {tau}")


class BigramPredictor:
    """Successor-frequency table of a training sequence.

    Predicts the most frequent follower of the current symbol when its
    conditional frequency clears the threshold; the first position, having
    no current symbol, always abstains.
    """

    def __init__(self, train: Sequence):
        if len(train) < 2:
            raise ValueError("bigram baseline needs at least two elements")
        self.alphabet = train.alphabet
        k = len(train.alphabet)
        table = np.zeros((k, k), dtype=np.float64)
        ids = train.ids
        for a, b in zip(ids, ids[1:]):
            table[a, b] += 1.0
        row = table.sum(axis=1, keepdims=True)
        np.divide(table, row, out=table, where=row > 0)
        self.table = table

    def position_distributions(self, s: Sequence) -> np.ndarray:
        ids = _aligned_ids(s, self.alphabet)
        out = np.zeros((ids.size, len(self.alphabet)))
        if ids.size > 1:
            out[1:] = self.table[ids[:-1]]
        return out


class UniformPredictor:
    """Chance-level baseline: constant 1/k confidence in every symbol."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def position_distributions(self, s: Sequence) -> np.ndarray:
        k = len(self.alphabet)
        ids = _aligned_ids(s, self.alphabet)
        return np.full((ids.size, k), 1.0 / k)


def bigram_baseline(train: Sequence) -> BigramPredictor:
    return BigramPredictor(train)


def evaluate_prediction(
    predictor: Model | BigramPredictor | UniformPredictor,
    test: Sequence,
    taus: Iterable[float] = DEFAULT_TAUS,
) -> PredictionOutcome:
    """Predict every element of `test` from its full preceding history.

    At each threshold the predictor answers only when its confidence
    clears the threshold; abstentions lower recall but never precision.
    The recall/precision points over the sweep are summarized by a
    trapezoidal area.
    """
    if isinstance(predictor, Model):
        dists = position_distributions(predictor, test)
        truth = _aligned_ids(test, predictor.alphabet)
    else:
        dists = predictor.position_distributions(test)
        truth = _aligned_ids(test, predictor.alphabet)
    n = truth.size
    if n == 0:
        raise ValueError("empty input")
    top = dists.max(axis=1)
    pick = dists.argmax(axis=1)
    good = pick == truth
    metrics = []
    for tau in taus:
        answer = top > tau
        metrics.append(
            ThresholdMetrics(
                tau=float(tau),
                predicted=int(answer.sum()),
                correct=int((answer & good).sum()),
                total=n,
            )
        )
    points = sorted((tm.recall, tm.precision) for tm in metrics)
    auc = 0.0
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        auc += (x2 - x1) * (y1 + y2) / 2.0
    return PredictionOutcome(tuple(metrics), tuple(points), auc)


@dataclass(frozen=True)
class ClassifierModel:
    """One mined model per class label, all over a shared alphabet."""

    models: Mapping[str, Model]

    def __post_init__(self) -> None:
        if not self.models:
            raise ValueError("at least one class required")
        alphabets = {m.alphabet for m in self.models.values()}
        if len(alphabets) != 1:
            raise ValueError("class models must share one alphabet")

    @property
    def alphabet(self) -> Alphabet:
        return next(iter(self.models.values())).alphabet

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.models))


def train_classifier(
    training: Mapping[str, Sequence | Iterable[Sequence]],
    config: MiningConfig | None = None,
) -> ClassifierModel:
    """Mine one model per class from its concatenated training material.

    All classes are interned over the union alphabet so any class model
    can score any instance.
    """
    if not training:
        raise ValueError("at least one class required")
    per_class: dict[str, list[Sequence]] = {}
    for label in sorted(training):
        value = training[label]
        seqs = [value] if isinstance(value, Sequence) else list(value)
        if not seqs:
            raise ValueError(f"class {label!r} has no training data")
        per_class[label] = seqs

    shared: Alphabet | None = None
    for seqs in per_class.values():
        for q in seqs:
            shared = q.alphabet if shared is None else shared.union(q.alphabet)
    assert shared is not None

    models: dict[str, Model] = {}
    for label, seqs in per_class.items():
        ids: list[int] = []
        for q in seqs:
            ids.extend(q.reindexed(shared).ids)
        models[label] = cossu_mine(Sequence(shared, tuple(ids)), config)
    return ClassifierModel(models)


def classify(clf: ClassifierModel, s: Sequence) -> str:
    """Label whose model spends the fewest data bits on s.

    Ties break toward the canonically first class name.
    """
    best_label: str | None = None
    best_bits = float("inf")
    for label in clf.labels:
        bits = data_code_length(clf.models[label], s)
        if bits < best_bits:
            best_label, best_bits = label, bits
    assert best_label is not None
    return best_label
