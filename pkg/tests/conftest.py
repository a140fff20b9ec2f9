"""Shared fixtures: a seeded sampler of rational Heun instances and the
hand-checked sample used throughout the examples."""

import random
from fractions import Fraction

import pytest

from heunlab import HeunLabError, HeunParams, heun_recurrence

SEED = 20260823

# third singular points the instance sampler draws from
A_POOL = (Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2),
          Fraction(3), Fraction(5, 2), Fraction(-3), Fraction(4),
          Fraction(7, 3), Fraction(-5, 2))


def sample_params(rng: random.Random) -> HeunParams:
    """One random rational instance; parameters stay in [-3/2, 3/2] so the
    lag-coefficient limits are approached at the documented O(1/n) rate."""
    a = rng.choice(A_POOL)

    def v():
        return Fraction(rng.randrange(-6, 7), rng.choice((4, 5, 6, 8)))

    while True:
        gamma = v()
        # gamma at a nonpositive integer puts a pole in the recurrence
        if not (gamma <= 0 and gamma.denominator == 1):
            break
    return HeunParams(a, v(), v(), v(), gamma, v())


def sample_pool(count: int, seed: int = SEED):
    rng = random.Random(seed)
    return [sample_params(rng) for _ in range(count)]


def admissible_roots(params: HeunParams):
    """Indicial exponents whose series path has no denominator pole."""
    roots = [Fraction(0)]
    second = 1 - Fraction(params.gamma)
    if second != 0:
        try:
            heun_recurrence(params, second)
        except HeunLabError:
            return roots
        roots.append(second)
    return roots


@pytest.fixture(scope="session")
def instance_pool():
    return sample_pool(25)


@pytest.fixture(scope="session")
def a2_params():
    # a=2, q=1, all exponent parameters 1: the worked sample with
    # d_1 = 1/2, d_2 = 5/16, limits (3/2, -1/2)
    return HeunParams(2, 1, 1, 1, 1, 1)


@pytest.fixture
def rng():
    return random.Random(SEED)
