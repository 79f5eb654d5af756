import random

import pytest

from gamma2.exactmat import theorem_generators
from gamma2.words import Word


def random_word(n, length, rng):
    gens = theorem_generators(n)
    return Word((rng.choice(gens), rng.choice((1, -1))) for _ in range(length))


@pytest.fixture
def rng():
    return random.Random(20240601)
