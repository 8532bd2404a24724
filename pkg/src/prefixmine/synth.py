"""Reproducible synthetic transaction databases.

Two generator families: independent Bernoulli columns whose rates are
drawn from a mixture of intervals, and a thresholded Gaussian AR(3) process
whose time steps become the items (so consecutive items are correlated).

Randomness is numpy PCG64 with one child seed sequence per variable (per
time step for the AR family), so extending a database with more variables
never perturbs the columns already generated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bitdata import BitColumn, TransactionDatabase, as_fraction
from .errors import ContractError

__all__ = [
    "GenProfile",
    "SPARSE_INTERVALS",
    "DENSE_INTERVALS",
    "sparse_profile",
    "dense_profile",
    "ar3_profile",
    "gen_bernoulli",
    "gen_ar3",
    "stats",
    "DatabaseStats",
    "parse_profile_config",
]

# mixture rows: (fraction of variables, low rate, high rate)
SPARSE_INTERVALS = ((0.30, 0.005, 0.08), (0.30, 0.08, 0.12), (0.30, 0.12, 0.15), (0.10, 0.15, 0.25))
DENSE_INTERVALS = ((0.20, 0.05, 0.13), (0.35, 0.13, 0.16), (0.35, 0.16, 0.20), (0.10, 0.20, 0.40))

AR_COEFFS = (1.15, -0.06, -0.1485)
AR_NOISE_STD = 0.5  # white-noise standard deviation of the AR(3) recursion
AR_SPARSE_THRESHOLD = 2.3
AR_DENSE_THRESHOLD = 1.7
AR_BURN_IN = 500


@dataclass(frozen=True)
class GenProfile:
    """Specification of a synthetic database."""

    kind: str  # "bernoulli" or "ar3"
    n: int
    n_transactions: int
    seed: int
    intervals: tuple[tuple[float, float, float], ...] = ()
    s: float = AR_SPARSE_THRESHOLD
    burn_in: int = AR_BURN_IN

    def __post_init__(self):
        if self.kind not in ("bernoulli", "ar3"):
            raise ContractError(f"unknown generator kind {self.kind!r}")
        if self.n < 1 or self.n_transactions < 1:
            raise ContractError("n and N must be >= 1")
        if self.kind == "bernoulli":
            if not self.intervals:
                raise ContractError("bernoulli profile needs at least one interval")
            total = sum(as_fraction(f) for f, _, _ in self.intervals)
            if abs(total - 1) > Fraction(1, 10**9):
                raise ContractError(f"interval fractions sum to {float(total)}, not 1")
            for frac, lo, hi in self.intervals:
                if not (0 <= lo <= hi <= 1):
                    raise ContractError(f"bad rate interval [{lo}, {hi}]")
                if frac < 0:
                    raise ContractError("interval fractions must be >= 0")


def sparse_profile(n: int, n_transactions: int, seed: int) -> GenProfile:
    return GenProfile("bernoulli", n, n_transactions, seed, SPARSE_INTERVALS)


def dense_profile(n: int, n_transactions: int, seed: int) -> GenProfile:
    return GenProfile("bernoulli", n, n_transactions, seed, DENSE_INTERVALS)


def ar3_profile(n: int, n_transactions: int, seed: int, s: float = AR_SPARSE_THRESHOLD) -> GenProfile:
    return GenProfile("ar3", n, n_transactions, seed, s=s)


def _group_bounds(intervals, n: int) -> list[int]:
    """Cumulative variable counts per mixture row: floor of the exact
    cumulative fraction, with the last bound forced to n."""
    bounds = []
    cum = Fraction(0)
    for frac, _, _ in intervals:
        cum += as_fraction(frac)
        bounds.append(int(cum * n))
    bounds[-1] = n
    return bounds


def _interval_of(intervals, bounds: Sequence[int], j: int) -> tuple[float, float]:
    for b, (_, lo, hi) in zip(bounds, intervals):
        if j < b:
            return lo, hi
    return intervals[-1][1], intervals[-1][2]


def _pack(mask: np.ndarray, n_transactions: int) -> BitColumn:
    data = np.packbits(mask.astype(np.uint8), bitorder="little").tobytes()
    return BitColumn.from_bytes_le(data, n_transactions)


def gen_bernoulli(profile: GenProfile, seed: int | None = None) -> TransactionDatabase:
    """Independent Bernoulli columns; each variable's rate is uniform on
    its mixture interval.  Labels are 1..n."""
    if profile.kind != "bernoulli":
        raise ContractError(f"profile kind is {profile.kind!r}, expected bernoulli")
    entropy = profile.seed if seed is None else seed
    n, big_n = profile.n, profile.n_transactions
    bounds = _group_bounds(profile.intervals, n)
    columns = []
    for j in range(n):
        lo, hi = _interval_of(profile.intervals, bounds, j)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy, spawn_key=(j,))))
        p = rng.uniform(lo, hi)
        mask = rng.random(big_n) < p
        columns.append(_pack(mask, big_n))
    return TransactionDatabase(big_n, tuple(range(1, n + 1)), columns)


def gen_ar3(
    n: int,
    n_transactions: int,
    s: float,
    seed: int,
    burn_in: int = AR_BURN_IN,
) -> TransactionDatabase:
    """Thresholded AR(3) rows: item t is on iff the process exceeds s at
    step t.

    Each of the N rows is one independent path started at zero and burned
    in for ``burn_in`` steps, so step 1 is already near-stationary.  Noise
    is drawn per time step from its own child stream, which keeps columns
    1..n bit-identical when n grows (growing n means continuing the
    process).  Labels are 1..n.
    """
    if n < 1:
        raise ContractError("n must be >= 1")
    c1, c2, c3 = AR_COEFFS
    z1 = np.zeros(n_transactions)
    z2 = np.zeros(n_transactions)
    z3 = np.zeros(n_transactions)
    columns = []
    for t in range(burn_in + n):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(t,))))
        z = c1 * z1 + c2 * z2 + c3 * z3 + rng.standard_normal(n_transactions) * AR_NOISE_STD
        z3, z2, z1 = z2, z1, z
        if t >= burn_in:
            columns.append(_pack(z > s, n_transactions))
    return TransactionDatabase(n_transactions, tuple(range(1, n + 1)), columns)


@dataclass(frozen=True)
class DatabaseStats:
    n_transactions: int
    n_items: int
    mean_items: Fraction | None  # items per transaction; None when N = 0
    support_quantiles: tuple[int, ...] | None  # min, p25, median, p75, max

    def __str__(self) -> str:
        me = "n/a" if self.mean_items is None else f"{float(self.mean_items):.3f}"
        return (
            f"N={self.n_transactions} n={self.n_items} Me={me} "
            f"support_quantiles={self.support_quantiles}"
        )


def stats(db: TransactionDatabase) -> DatabaseStats:
    """Exact summary: density (mean items per transaction) and the spread
    of per-item supports."""
    supports = sorted(c.count() for c in db.columns)
    if db.n_transactions == 0:
        mean = None
    else:
        mean = Fraction(sum(supports), db.n_transactions)
    if not supports:
        quantiles = None
    else:
        last = len(supports) - 1
        quantiles = tuple(supports[round(last * f)] for f in (0, 0.25, 0.5, 0.75, 1))
    return DatabaseStats(db.n_transactions, db.n_items, mean, quantiles)


def parse_profile_config(text: str) -> GenProfile:
    """Build a profile from key=value lines.

    Recognized keys: kind (sparse | dense | bernoulli | ar3), n, N, seed,
    s, burn_in, intervals (semicolon-separated ``frac,lo,hi`` triples for
    kind=bernoulli).
    """
    fields: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ContractError(f"profile line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        fields[key.strip()] = value.strip()
    kind = fields.get("kind", "sparse")
    n = int(fields.get("n", "100"))
    big_n = int(fields.get("N", "1000"))
    seed = int(fields.get("seed", "0"))
    if kind == "sparse":
        return sparse_profile(n, big_n, seed)
    if kind == "dense":
        return dense_profile(n, big_n, seed)
    if kind == "ar3":
        s = float(fields.get("s", str(AR_SPARSE_THRESHOLD)))
        burn = int(fields.get("burn_in", str(AR_BURN_IN)))
        return GenProfile("ar3", n, big_n, seed, s=s, burn_in=burn)
    if kind == "bernoulli":
        if "intervals" not in fields:
            raise ContractError("kind=bernoulli needs intervals=frac,lo,hi;...")
        intervals = []
        for part in fields["intervals"].split(";"):
            frac, lo, hi = (float(x) for x in part.split(","))
            intervals.append((frac, lo, hi))
        return GenProfile("bernoulli", n, big_n, seed, tuple(intervals))
    raise ContractError(f"unknown profile kind {kind!r}")
