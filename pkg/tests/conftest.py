import random

import pytest

from cossu import Alphabet, Sequence


def char_seq(text: str) -> Sequence:
    """A sequence where every character of the text is one token."""
    return Sequence.from_tokens(Alphabet(set(text)), list(text))


def random_seq(rng: random.Random, n: int, k: int) -> Sequence:
    alphabet = Alphabet(chr(ord("a") + i) for i in range(k))
    ids = tuple(rng.randrange(k) for _ in range(n))
    return Sequence(alphabet, ids)


@pytest.fixture
def worked() -> Sequence:
    return char_seq("abceabcadeab")
