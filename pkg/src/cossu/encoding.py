"""Code-length accounting for weighted rule tables.

Nothing here emits an actual bitstream: all lengths are idealized
real-valued bits. A model transmits its rule table first (universal integer
codes for counts and lengths, background symbol codes for rule content,
reversed-digit universal codes for weights), then each sequence element
under the predictive distribution induced by the active rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .rules import Rule, singleton_rules
from .sequence import Alphabet, FrequencyTable, Sequence

#: Normalizer making the log-star code satisfy the Kraft inequality.
UNIVERSAL_CODE_CONSTANT = 2.865064

_LOG2_C0 = math.log2(UNIVERSAL_CODE_CONSTANT)


def log2_star(z: float) -> float:
    """Sum of the strictly positive iterated base-2 logarithms of z."""
    total = 0.0
    t = math.log2(z)
    while t > 0.0:
        total += t
        t = math.log2(t)
    return total


def universal_int_code_length(z: int) -> float:
    """Prefix-free code length for a positive integer."""
    if z < 1:
        raise ValueError(f"universal code needs a positive integer, got {z}")
    return log2_star(z) + _LOG2_C0


def quantize_weight(w: float, precision: int) -> float:
    """Round w to the given number of decimals, clamped into (0, 1)."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    q = float(f"{w:.{precision}f}")
    step = 10.0**-precision
    if q <= 0.0:
        q = step
    elif q >= 1.0:
        q = 1.0 - step
    return q


def _weight_digits(w: float, precision: int) -> str:
    """Significant decimal digits of a weight in (0, 1), trailing zeros cut."""
    if not 0.0 < w < 1.0:
        raise ValueError(f"weight must lie strictly inside (0, 1), got {w}")
    text = f"{quantize_weight(w, precision):.{precision}f}"
    digits = text.split(".")[1].rstrip("0")
    return digits


def weight_code_length(w: float, precision: int) -> float:
    """Bits to transmit a weight at fixed decimal precision.

    The significant decimals are listed in reverse to form an integer that
    is coded universally, so the price grows with the number of significant
    digits rather than with the value.
    """
    digits = _weight_digits(w, precision)
    return universal_int_code_length(int(digits[::-1]))


def rule_code_length(
    rule: Rule, f: FrequencyTable, weight: float, precision: int
) -> float:
    """Bits for one table entry: antecedent, consequent, then weight."""
    bits = universal_int_code_length(len(rule.antecedent) + 1)
    bits += sum(f.code_length(sid) for sid in rule.antecedent)
    bits += universal_int_code_length(len(rule.consequent))
    bits += sum(f.code_length(sid) for sid in rule.consequent)
    return bits + weight_code_length(weight, precision)


@dataclass(frozen=True)
class DLReport:
    """Two-part description length of a (model, sequence) pair."""

    model_bits: float
    data_bits: float

    @property
    def total(self) -> float:
        return self.model_bits + self.data_bits


@dataclass(frozen=True)
class Model:
    """A weighted rule table plus the background statistics it was fit on.

    Rules are laid out with the singleton of every alphabet symbol first,
    in canonical order, followed by the proper rules in insertion order.
    Weights are unconstrained positives while a model is being optimized
    and live in (0, 1) once normalized for serialization.
    """

    alphabet: Alphabet
    freq: FrequencyTable
    rules: tuple[Rule, ...]
    weights: tuple[float, ...]
    precision: int = 4

    def __post_init__(self) -> None:
        if self.freq.alphabet != self.alphabet:
            raise ValueError("frequency table alphabet mismatch")
        if len(self.rules) != len(self.weights):
            raise ValueError("one weight per rule required")
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        k = len(self.alphabet)
        expected = singleton_rules(self.alphabet)
        if self.rules[:k] != expected:
            raise ValueError(
                "model must start with the singleton rule of every alphabet "
                "symbol in canonical order"
            )
        tail = self.rules[k:]
        if any(r.is_singleton for r in tail):
            raise ValueError("duplicate singleton rule")
        if len(set(tail)) != len(tail):
            raise ValueError("duplicate rule")
        if any(not (w > 0.0 and math.isfinite(w)) for w in self.weights):
            raise ValueError("weights must be finite and strictly positive")

    @classmethod
    def empty(cls, freq: FrequencyTable, precision: int = 4) -> "Model":
        """The singleton-only model, weighted by background probabilities."""
        rules = singleton_rules(freq.alphabet)
        weights = tuple(freq.prob(sid) for sid in range(len(freq.alphabet)))
        return cls(freq.alphabet, freq, rules, weights, precision)

    def non_singletons(self) -> tuple[Rule, ...]:
        return self.rules[len(self.alphabet) :]

    def weight_of(self, rule: Rule) -> float:
        return self.weights[self.rules.index(rule)]

    def with_weights(self, weights: Iterable[float]) -> "Model":
        return replace(self, weights=tuple(float(w) for w in weights))

    def with_rule(self, rule: Rule, weight: float) -> "Model":
        return replace(
            self,
            rules=self.rules + (rule,),
            weights=self.weights + (float(weight),),
        )


def model_code_length(m: Model) -> float:
    """Bits to transmit the rule table: its size, then every entry."""
    bits = universal_int_code_length(len(m.rules))
    for rule, w in zip(m.rules, m.weights):
        bits += rule_code_length(rule, m.freq, w, m.precision)
    return bits


def _aligned_ids(s: Sequence, alphabet: Alphabet) -> np.ndarray:
    """Sequence ids re-expressed in the model alphabet."""
    if s.alphabet == alphabet:
        return np.asarray(s.ids, dtype=np.int64)
    return np.asarray(
        [alphabet.id_of(t) for t in s.tokens], dtype=np.int64
    )


def _history_ids(
    history: Sequence | tuple[int, ...], alphabet: Alphabet
) -> tuple[int, ...]:
    if isinstance(history, Sequence):
        if history.alphabet == alphabet:
            return history.ids
        return tuple(alphabet.id_of(t) for t in history.tokens)
    return tuple(history)


def predictive_distribution(
    m: Model, history: Sequence | tuple[int, ...]
) -> np.ndarray:
    """Next-element distribution over the alphabet given the history.

    Sums the weights of the active (rule, stage) pairs per predicted
    symbol and divides by the total active weight. Singletons keep every
    entry strictly positive.
    """
    hist = _history_ids(history, m.alphabet)
    k = len(m.alphabet)
    mass = np.array(m.weights[:k], dtype=np.float64)
    hl = len(hist)
    for rule, w in zip(m.rules[k:], m.weights[k:]):
        a, c = rule.antecedent, rule.consequent
        for j in range(len(c)):
            g = len(a) + j
            if g == 0 or (g <= hl and hist[hl - g :] == a + c[:j]):
                mass[c[j]] += w
    return mass / mass.sum()


class SequenceScorer:
    """Incremental per-position code-length state for one model on one
    sequence.

    For every position t the scorer tracks the total active weight (den)
    and the active weight backing the symbol that actually occurs (num);
    the data bits are sum(log2(den) - log2(num)). Rule activity positions
    are immutable once built, so clones share them and a weight change
    touches only the affected positions.
    """

    def __init__(self, model: Model, s: Sequence):
        self.alphabet = model.alphabet
        self.freq = model.freq
        self.precision = model.precision
        self.s_arr = _aligned_ids(s, model.alphabet)
        self.n = int(self.s_arr.size)
        self.k = len(model.alphabet)
        self.rules: list[Rule] = list(model.rules)
        self.weights = np.array(model.weights, dtype=np.float64)
        # Singleton activity is implicit (always on, predicting own symbol);
        # entries are kept aligned with self.rules, None for singletons.
        self._acts: list[tuple[np.ndarray | None, np.ndarray, np.ndarray] | None]
        self._acts = [None] * self.k
        singleton_w = self.weights[: self.k]
        self.den = np.full(self.n, float(singleton_w.sum()))
        self.num = singleton_w[self.s_arr].copy()
        for idx in range(self.k, len(self.rules)):
            act = self._build_activity(self.rules[idx])
            self._acts.append(act)
            self._shift(act, self.weights[idx])
        self._recompute()

    # -- construction helpers -------------------------------------------

    def _build_activity(
        self, rule: Rule
    ) -> tuple[np.ndarray | None, np.ndarray, np.ndarray]:
        """Positions where the rule is active, with per-position stage
        counts (q) and correctly-predicting stage counts (p)."""
        n = self.n
        qv = np.zeros(n, dtype=np.float64)
        pv = np.zeros(n, dtype=np.float64)
        covers_all = False
        a, c = rule.antecedent, rule.consequent
        for j in range(len(c)):
            g = len(a) + j
            target = c[j]
            if g == 0:
                covers_all = True
                qv += 1.0
                pv += self.s_arr == target
                continue
            ends = _match_end_indices(self.s_arr, a + c[:j])
            t = ends + 1
            t = t[t < n]
            if t.size:
                qv[t] += 1.0
                pv[t] += self.s_arr[t] == target
        if covers_all:
            return None, pv, qv
        pos = np.flatnonzero(qv)
        return pos, pv[pos], qv[pos]

    def _shift(
        self,
        act: tuple[np.ndarray | None, np.ndarray, np.ndarray],
        delta: float,
    ) -> None:
        pos, p, q = act
        if pos is None:
            self.num += delta * p
            self.den += delta * q
        elif pos.size:
            self.num[pos] += delta * p
            self.den[pos] += delta * q

    def _recompute(self) -> None:
        self._total = float(
            np.sum(np.log2(self.den)) - np.sum(np.log2(self.num))
        )

    # -- queries ---------------------------------------------------------

    @property
    def data_bits(self) -> float:
        return self._total

    def model(self) -> Model:
        return Model(
            self.alphabet,
            self.freq,
            tuple(self.rules),
            tuple(float(w) for w in self.weights),
            self.precision,
        )

    def weight_objective(self, index: int):
        """Data bits as a function of rule `index`'s weight, others fixed.

        Returns (objective, current_weight); each objective call costs one
        pass over the rule's active positions only.
        """
        w0 = float(self.weights[index])
        if index < self.k:
            pos: np.ndarray | None = None
            p = (self.s_arr == index).astype(np.float64)
            q: np.ndarray | float = 1.0
        else:
            act = self._acts[index]
            assert act is not None
            pos, p, q = act
        if pos is None:
            base_num, base_den = self.num, self.den
            rest = 0.0
        else:
            if pos.size == 0:
                total = self._total
                return (lambda w: total), w0
            base_num = self.num[pos]
            base_den = self.den[pos]
            rest = self._total - float(
                np.sum(np.log2(base_den)) - np.sum(np.log2(base_num))
            )

        def objective(w: float) -> float:
            d = w - w0
            nn = base_num + d * p
            dd = base_den + d * q
            return rest + float(np.sum(np.log2(dd)) - np.sum(np.log2(nn)))

        return objective, w0

    # -- mutations --------------------------------------------------------

    def set_weight(self, index: int, w: float) -> None:
        delta = float(w) - float(self.weights[index])
        if delta == 0.0:
            return
        if index < self.k:
            sid = index
            self.num += delta * (self.s_arr == sid)
            self.den += delta
        else:
            act = self._acts[index]
            assert act is not None
            self._shift(act, delta)
        self.weights[index] = float(w)
        self._recompute()

    def add_rule(self, rule: Rule, weight: float) -> None:
        act = self._build_activity(rule)
        self.rules.append(rule)
        self._acts.append(act)
        self.weights = np.append(self.weights, float(weight))
        self._shift(act, float(weight))
        self._recompute()

    def remove_rule(self, index: int) -> None:
        if index < self.k:
            raise ValueError("singleton rules cannot be removed")
        act = self._acts[index]
        assert act is not None
        self._shift(act, -float(self.weights[index]))
        del self.rules[index]
        del self._acts[index]
        self.weights = np.delete(self.weights, index)
        self._recompute()

    def clone(self) -> "SequenceScorer":
        twin = object.__new__(SequenceScorer)
        twin.alphabet = self.alphabet
        twin.freq = self.freq
        twin.precision = self.precision
        twin.s_arr = self.s_arr
        twin.n = self.n
        twin.k = self.k
        twin.rules = list(self.rules)
        twin.weights = self.weights.copy()
        twin._acts = list(self._acts)  # activity tuples are never mutated
        twin.num = self.num.copy()
        twin.den = self.den.copy()
        twin._total = self._total
        return twin


def _match_end_indices(arr: np.ndarray, pattern: tuple[int, ...]) -> np.ndarray:
    """0-based end indices of all matches of the pattern in arr."""
    m = len(pattern)
    n = arr.size
    if m == 0 or m > n:
        return np.empty(0, dtype=np.int64)
    hits = arr[: n - m + 1] == pattern[0]
    for off in range(1, m):
        hits = hits & (arr[off : n - m + 1 + off] == pattern[off])
    return np.flatnonzero(hits) + (m - 1)


def data_code_length(m: Model, s: Sequence) -> float:
    """Bits to transmit s element by element under the model.

    Position t is charged -log2 of the probability the model assigns to
    s[t] given s[1, t-1]; the first element sees the empty history.
    """
    if len(s) == 0:
        return 0.0
    return SequenceScorer(m, s).data_bits


def total_dl(m: Model, s: Sequence) -> DLReport:
    """Two-part description length: rule table plus data given the table."""
    return DLReport(model_code_length(m), data_code_length(m, s))


def position_distributions(m: Model, s: Sequence) -> np.ndarray:
    """Predictive distribution at every position of s, as an (n, k) array.

    Row t is the model's next-element distribution given s[1, t]...s[t-1],
    i.e. what the model would predict just before seeing s[t].
    """
    ids = _aligned_ids(s, m.alphabet)
    n = ids.size
    k = len(m.alphabet)
    mass = np.tile(np.array(m.weights[:k], dtype=np.float64), (n, 1))
    for rule, w in zip(m.rules[k:], m.weights[k:]):
        a, c = rule.antecedent, rule.consequent
        for j in range(len(c)):
            g = len(a) + j
            target = c[j]
            if g == 0:
                mass[:, target] += w
                continue
            ends = _match_end_indices(ids, a + c[:j])
            t = ends + 1
            t = t[t < n]
            if t.size:
                mass[t, target] += w
    return mass / mass.sum(axis=1, keepdims=True)
