"""Shared fixtures: catalog structures and seeded random forms."""

import itertools
import random

import pytest

from nilkahler import catalog
from nilkahler.algebra.forms import InvariantForm
from nilkahler.algebra.scalars import Scalar


def random_scalar(rng: random.Random, bound: int = 3) -> Scalar:
    return Scalar(rng.randint(-bound, bound), rng.randint(-bound, bound))


def random_form(rng: random.Random, n: int, p: int, q: int, terms: int = 3) -> InvariantForm:
    """A (p,q)-form with a few random Gaussian-integer coefficients."""
    hol = list(itertools.combinations(range(1, n + 1), p))
    anti = list(itertools.combinations(range(1, n + 1), q))
    return InvariantForm(n, {(rng.choice(hol), rng.choice(anti)): random_scalar(rng) for _ in range(terms)})


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def etabeta5():
    return catalog.load_entry("etabeta5")


@pytest.fixture
def etabeta5_psi():
    return catalog.load_entry("etabeta5-psi")


@pytest.fixture
def iwasawa():
    return catalog.load_entry("iwasawa")


@pytest.fixture
def kodaira_thurston():
    return catalog.load_entry("kodaira-thurston")


@pytest.fixture
def symplectic3():
    return catalog.load_entry("symplectic3-family")
