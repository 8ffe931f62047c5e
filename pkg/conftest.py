import random
from fractions import Fraction

import pytest

from laurent_core import T, add, constant, monomial, scale
from maps import make_map

CORPUS_SEED = 20240611
CORPUS_SIZE = 20


def random_unit(rng):
    """Nonzero rational with small numerator and denominator"""
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 3))


def random_coefficient(rng, low=-2, high=2):
    """Element of valuation in [low, high], sometimes with a second term"""
    e = rng.randint(low, high)
    c = monomial(random_unit(rng), e)
    if rng.random() < 0.5:
        c = add(c, monomial(random_unit(rng), e + rng.randint(1, 3)))
    return c


def random_multiplier(rng):
    choice = rng.randrange(4)
    if choice == 0:
        return 1 + T
    if choice == 1:
        return -1 + T
    if choice == 2:
        return 2 + T
    return add(constant(Fraction(1, 3)), scale(T, random_unit(rng)))


def random_map(rng):
    degree = rng.randint(2, 5)
    higher = {degree: random_coefficient(rng)}
    for i in range(2, degree):
        if rng.random() < 0.6:
            higher[i] = random_coefficient(rng)
    return make_map(random_multiplier(rng), higher)


@pytest.fixture(scope="session")
def corpus():
    rng = random.Random(CORPUS_SEED)
    return [random_map(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture
def rng():
    return random.Random(7)
