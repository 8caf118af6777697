"""Symbols, alphabets, sequences and contiguous-match primitives.

Positions in the public API are 1-based; the internal representation is a
plain tuple of interned integer ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


@dataclass(frozen=True)
class Symbol:
    """An interned alphabet symbol: a small stable id plus its text token."""

    id: int
    token: str


class Alphabet:
    """Immutable token table.

    Ids follow the canonical order (lexicographic on tokens), so two
    alphabets built from the same token set intern identically.
    """

    __slots__ = ("_tokens", "_index")

    def __init__(self, tokens: Iterable[str]):
        toks = sorted(tokens)
        if not toks:
            raise ValueError("alphabet must not be empty")
        for a, b in zip(toks, toks[1:]):
            if a == b:
                raise ValueError(f"duplicate token: {a!r}")
        self._tokens: tuple[str, ...] = tuple(toks)
        self._index: dict[str, int] = {t: i for i, t in enumerate(self._tokens)}

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(Symbol(i, t) for i, t in enumerate(self._tokens))

    def id_of(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise ValueError(f"unknown symbol: {token!r}") from None

    def token_of(self, sid: int) -> str:
        return self._tokens[sid]

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(set(self._tokens) | set(other._tokens))

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self._tokens)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self._tokens == other._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    def __repr__(self) -> str:
        return f"Alphabet({list(self._tokens)!r})"


@dataclass(frozen=True)
class Sequence:
    """An immutable run of symbol ids over one alphabet."""

    alphabet: Alphabet
    ids: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.alphabet)
        for sid in self.ids:
            if not 0 <= sid < k:
                raise ValueError(f"symbol id out of range: {sid}")

    @classmethod
    def from_tokens(cls, alphabet: Alphabet, tokens: Iterable[str]) -> "Sequence":
        return cls(alphabet, tuple(alphabet.id_of(t) for t in tokens))

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.alphabet.token_of(i) for i in self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def symbol_at(self, i: int) -> int:
        """Id of the i-th element, 1-based."""
        if not 1 <= i <= len(self.ids):
            raise IndexError(f"position out of range: {i}")
        return self.ids[i - 1]

    def segment(self, i: int, j: int) -> "Sequence":
        """The contiguous run from position i to j inclusive (1-based).

        Empty when i > j, mirroring the convention that an out-of-order
        index pair denotes the empty sequence.
        """
        if i > j:
            return Sequence(self.alphabet, ())
        if i < 1 or j > len(self.ids):
            raise IndexError(f"segment out of range: [{i}, {j}]")
        return Sequence(self.alphabet, self.ids[i - 1 : j])

    def reindexed(self, alphabet: Alphabet) -> "Sequence":
        """The same token run interned against another alphabet."""
        if alphabet == self.alphabet:
            return Sequence(alphabet, self.ids)
        return Sequence.from_tokens(alphabet, self.tokens)


def _pattern_ids(pattern: Sequence, s: Sequence) -> tuple[int, ...] | None:
    """Pattern ids expressed in s's alphabet; None when a token cannot occur."""
    if pattern.alphabet == s.alphabet:
        return pattern.ids
    out = []
    for tok in pattern.tokens:
        if tok not in s.alphabet:
            return None
        out.append(s.alphabet.id_of(tok))
    return tuple(out)


def matches_ending_at(pattern: Sequence, s: Sequence) -> list[int]:
    """All 1-based positions j such that s[j-|p|+1, j] equals the pattern."""
    if len(pattern) == 0:
        raise ValueError("empty pattern")
    pat = _pattern_ids(pattern, s)
    if pat is None:
        return []
    data = s.ids
    n, m = len(data), len(pat)
    return [j for j in range(m, n + 1) if data[j - m : j] == pat]


def matches_starting_at(pattern: Sequence, s: Sequence) -> list[int]:
    """All 1-based positions i such that s[i, i+|p|-1] equals the pattern."""
    if len(pattern) == 0:
        raise ValueError("empty pattern")
    pat = _pattern_ids(pattern, s)
    if pat is None:
        return []
    data = s.ids
    n, m = len(data), len(pat)
    return [i for i in range(1, n - m + 2) if data[i - 1 : i - 1 + m] == pat]


def support(pattern: Sequence, s: Sequence) -> int:
    """Number of distinct contiguous matches of the pattern in s."""
    return len(matches_ending_at(pattern, s))


class FrequencyTable:
    """Per-symbol empirical frequencies of a training sequence.

    Counts are kept exact; symbols of the alphabet that never occur keep a
    zero count and fall back to the smoothing weight 1/(2n) wherever a
    strictly positive probability is required for encoding.
    """

    __slots__ = ("alphabet", "counts", "n", "_code_lengths")

    def __init__(self, alphabet: Alphabet, counts: Iterable[int], n: int):
        counts = tuple(int(c) for c in counts)
        if len(counts) != len(alphabet):
            raise ValueError("one count per alphabet symbol required")
        if n < 1:
            raise ValueError("empty input")
        if sum(counts) != n:
            raise ValueError("counts do not sum to the sequence length")
        if any(c < 0 for c in counts):
            raise ValueError("negative count")
        self.alphabet = alphabet
        self.counts = counts
        self.n = n
        eps = 0.5 / n
        self._code_lengths = tuple(
            -math.log2(c / n if c else eps) for c in counts
        )

    @property
    def smoothing(self) -> float:
        """Stand-in probability for alphabet symbols unseen in training."""
        return 0.5 / self.n

    def prob(self, sid: int) -> float:
        c = self.counts[sid]
        return c / self.n if c else self.smoothing

    def code_length(self, sid: int) -> float:
        """Bits for one symbol under the background distribution."""
        return self._code_lengths[sid]

    def mapping(self) -> dict[str, Fraction]:
        """Exact frequencies of the occurring symbols, keyed by token."""
        return {
            self.alphabet.token_of(i): Fraction(c, self.n)
            for i, c in enumerate(self.counts)
            if c
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FrequencyTable)
            and self.alphabet == other.alphabet
            and self.counts == other.counts
            and self.n == other.n
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.counts, self.n))

    def __repr__(self) -> str:
        return f"FrequencyTable(n={self.n}, {dict(self.mapping())})"


def frequencies(s: Sequence) -> FrequencyTable:
    """Empirical symbol frequencies of s; rejects the empty sequence."""
    if len(s) == 0:
        raise ValueError("empty input")
    counts = [0] * len(s.alphabet)
    for sid in s.ids:
        counts[sid] += 1
    return FrequencyTable(s.alphabet, counts, len(s))
