"""Shared fixtures: the worked 5-transaction example and a deterministic
suite of random databases used by the equivalence and invariant tests."""

import random

import pytest

from prefixmine.bitdata import TransactionDatabase, load_horizontal

D5_TEXT = "1 2\n1 2 3\n2 3\n1\n2\n"


@pytest.fixture
def d5() -> TransactionDatabase:
    return load_horizontal(D5_TEXT)


def random_database(rng: random.Random) -> TransactionDatabase:
    """One random database: n in 3..12, N in 10..200, random densities."""
    n = rng.randint(3, 12)
    big_n = rng.randint(10, 200)
    densities = [rng.uniform(0.05, 0.9) for _ in range(n)]
    labels = list(range(1, n + 1))
    if rng.random() < 0.25:  # occasionally non-contiguous labels
        labels = sorted(rng.sample(range(0, 50), n))
    rows = []
    for _ in range(big_n):
        row = {lab for lab, p in zip(labels, densities) if rng.random() < p}
        if not row:
            row = {rng.choice(labels)}
        rows.append(row)
    return TransactionDatabase.from_transactions(rows)


def database_suite(count: int = 200, seed: int = 20240811) -> list[TransactionDatabase]:
    rng = random.Random(seed)
    return [random_database(rng) for _ in range(count)]


@pytest.fixture(scope="session")
def db_suite() -> list[TransactionDatabase]:
    return database_suite()


@pytest.fixture(scope="session")
def db_suite_small() -> list[TransactionDatabase]:
    """A lighter slice for the quadratic checks."""
    return database_suite(count=40, seed=987)
