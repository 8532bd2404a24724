"""Columnar binary transaction store.

A database of N transactions over n items is kept as one packed bit column
per item: bit i of column j is set iff transaction i contains item j.  The
support of an itemset is then the population count of the AND of its
columns, which is how every support in this package is computed.

Columns are backed by ``gmpy2.mpz`` (GMP limbs), so AND and popcount run
word-wise at C speed regardless of N.
"""

from __future__ import annotations

import csv as _csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import gmpy2

from .errors import ContractError, FormatError

__all__ = [
    "BitColumn",
    "TransactionDatabase",
    "ItemOrder",
    "intersect",
    "support",
    "threshold",
    "preprocess",
    "append_item",
    "load_horizontal",
    "dump_horizontal",
    "load_csv_matrix",
    "dump_csv_matrix",
    "as_fraction",
]


def as_fraction(x) -> Fraction:
    """Exact rational view of a threshold parameter.

    Floats are read through their shortest decimal repr, so 0.4 means 2/5
    (the decimal the caller wrote), not the nearest binary double.
    """
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def threshold(sigma, n_transactions: int) -> int:
    """Smallest integer T with T >= sigma * N.

    An itemset is frequent iff its support is >= T; for integer supports
    this is the same test as ``supp >= sigma * N`` with no float ambiguity.
    """
    sig = as_fraction(sigma)
    if sig < 0 or sig > 1:
        raise ContractError(f"relative support must be in [0, 1], got {sigma}")
    if n_transactions < 0:
        raise ContractError("transaction count must be >= 0")
    return int(math.ceil(sig * n_transactions))


class BitColumn:
    """Packed bit sequence of fixed length (one bit per transaction)."""

    __slots__ = ("bits", "length")

    def __init__(self, bits, length: int):
        if length < 0:
            raise ContractError("column length must be >= 0")
        self.bits = gmpy2.mpz(bits) & gmpy2.bit_mask(length)
        self.length = length

    @classmethod
    def from_indices(cls, indices: Iterable[int], length: int) -> "BitColumn":
        bits = gmpy2.mpz(0)
        for i in indices:
            if not 0 <= i < length:
                raise ContractError(f"bit index {i} out of range for length {length}")
            bits = bits.bit_set(i)
        return cls(bits, length)

    @classmethod
    def from_bytes_le(cls, data: bytes, length: int) -> "BitColumn":
        return cls(gmpy2.mpz(int.from_bytes(data, "little")), length)

    @classmethod
    def ones(cls, length: int) -> "BitColumn":
        return cls(gmpy2.bit_mask(length), length)

    @classmethod
    def zeros(cls, length: int) -> "BitColumn":
        return cls(0, length)

    def count(self) -> int:
        return int(gmpy2.popcount(self.bits))

    def test(self, i: int) -> bool:
        if not 0 <= i < self.length:
            raise ContractError(f"bit index {i} out of range for length {self.length}")
        return self.bits.bit_test(i)

    def indices(self) -> Iterator[int]:
        """Positions of set bits, ascending."""
        i = self.bits.bit_scan1(0)
        while i is not None:
            yield i
            i = self.bits.bit_scan1(i + 1)

    def __and__(self, other: "BitColumn") -> "BitColumn":
        if not isinstance(other, BitColumn):
            return NotImplemented
        if self.length != other.length:
            raise ContractError(
                f"column length mismatch: {self.length} != {other.length}"
            )
        out = object.__new__(BitColumn)
        out.bits = self.bits & other.bits
        out.length = self.length
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitColumn):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.length, int(self.bits)))

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"BitColumn(length={self.length}, count={self.count()})"


def intersect(a: BitColumn, b: BitColumn) -> BitColumn:
    """Per-transaction AND of two columns (the observation vector of a join)."""
    return a & b


def support(c: BitColumn) -> int:
    """Number of transactions in the column: its population count."""
    return c.count()


@dataclass(frozen=True)
class ItemOrder:
    """Internal column order fixed at preprocessing time.

    ``labels[j]`` is the external label of internal index j and
    ``supports[j]`` its support when the order was computed.
    """

    labels: tuple[int, ...]
    supports: tuple[int, ...]

    def label_of(self, index: int) -> int:
        return self.labels[index]

    def index_of(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None


class TransactionDatabase:
    """Immutable columnar view of N transactions over n items.

    Columns are ordered by internal index 0..n-1; that order is the item
    order every tree built from this database refers to.  External labels
    are arbitrary non-negative integers.
    """

    __slots__ = ("n_transactions", "labels", "columns", "_index")

    def __init__(self, n_transactions: int, labels: Sequence[int], columns: Sequence[BitColumn]):
        if len(labels) != len(columns):
            raise ContractError("labels and columns must have the same length")
        if len(set(labels)) != len(labels):
            raise ContractError("labels must be unique")
        for lab in labels:
            if lab < 0:
                raise ContractError(f"labels must be non-negative, got {lab}")
        for col in columns:
            if col.length != n_transactions:
                raise ContractError(
                    f"column length {col.length} != transaction count {n_transactions}"
                )
        self.n_transactions = n_transactions
        self.labels = tuple(labels)
        self.columns = tuple(columns)
        self._index = {lab: j for j, lab in enumerate(self.labels)}

    @property
    def n_items(self) -> int:
        return len(self.columns)

    def index_of(self, label: int) -> int:
        return self._index[label]

    def column_of(self, label: int) -> BitColumn:
        return self.columns[self._index[label]]

    def item_support(self, index: int) -> int:
        return self.columns[index].count()

    def transactions(self) -> Iterator[list[int]]:
        """Rebuild row view: ascending labels per transaction."""
        rows: list[list[int]] = [[] for _ in range(self.n_transactions)]
        for j, col in enumerate(self.columns):
            lab = self.labels[j]
            for i in col.indices():
                rows[i].append(lab)
        for row in rows:
            row.sort()
            yield row

    def restrict(self, indices: Sequence[int]) -> "TransactionDatabase":
        """Sub-database keeping the given internal indices, in the given order."""
        return TransactionDatabase(
            self.n_transactions,
            [self.labels[j] for j in indices],
            [self.columns[j] for j in indices],
        )

    @classmethod
    def from_transactions(cls, transactions: Sequence[Iterable[int]]) -> "TransactionDatabase":
        """Build columns from row data; labels are the union, sorted ascending."""
        rows = [set(t) for t in transactions]
        n = len(rows)
        labels = sorted(set().union(*rows)) if rows else []
        nbytes = (n + 7) // 8
        bufs = {lab: bytearray(nbytes) for lab in labels}
        for i, row in enumerate(rows):
            byte, bit = i >> 3, 1 << (i & 7)
            for lab in row:
                bufs[lab][byte] |= bit
        columns = [BitColumn.from_bytes_le(bytes(bufs[lab]), n) for lab in labels]
        return cls(n, labels, columns)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransactionDatabase):
            return NotImplemented
        return (
            self.n_transactions == other.n_transactions
            and self.labels == other.labels
            and self.columns == other.columns
        )

    def __repr__(self) -> str:
        return f"TransactionDatabase(N={self.n_transactions}, n={self.n_items})"


def load_horizontal(source) -> TransactionDatabase:
    """Parse the horizontal text format: one transaction per line, labels
    separated by spaces or tabs.

    Duplicate labels within a line are deduplicated (transactions are sets).
    Blank lines are skipped and reported with a single counted warning; they
    do not contribute to N.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("ascii")
    transactions: list[set[int]] = []
    blank = 0
    for lineno, line in enumerate(source.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            blank += 1
            continue
        row = set()
        for tok in tokens:
            try:
                lab = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad item label {tok!r}") from None
            if lab < 0:
                raise FormatError(f"line {lineno}: negative item label {lab}")
            row.add(lab)
        transactions.append(row)
    if blank:
        warnings.warn(f"skipped {blank} blank line(s) in horizontal input", stacklevel=2)
    return TransactionDatabase.from_transactions(transactions)


def dump_horizontal(db: TransactionDatabase, fh=None) -> str | None:
    """Write the horizontal format; items within a line ascending."""
    out = fh if fh is not None else io.StringIO()
    for row in db.transactions():
        out.write(" ".join(str(lab) for lab in row))
        out.write("\n")
    if fh is None:
        return out.getvalue()
    return None


def load_csv_matrix(source) -> TransactionDatabase:
    """Parse a 0/1 CSV matrix: header row holds the labels, one transaction
    per following row."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("ascii")
    reader = _csv.reader(io.StringIO(source))
    rows = [r for r in reader if r]
    if not rows:
        return TransactionDatabase.from_transactions([])
    try:
        labels = [int(c) for c in rows[0]]
    except ValueError:
        raise FormatError("CSV header must hold integer item labels") from None
    transactions = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(labels):
            raise FormatError(f"line {lineno}: expected {len(labels)} cells, got {len(row)}")
        t = set()
        for lab, cell in zip(labels, row):
            if cell not in ("0", "1"):
                raise FormatError(f"line {lineno}: cell must be 0 or 1, got {cell!r}")
            if cell == "1":
                t.add(lab)
        transactions.append(t)
    db = TransactionDatabase.from_transactions(transactions)
    # keep all header labels even if some column is empty
    missing = [lab for lab in sorted(labels) if lab not in db.labels]
    if missing:
        all_labels = sorted(labels)
        cols = []
        for lab in all_labels:
            if lab in db.labels:
                cols.append(db.column_of(lab))
            else:
                cols.append(BitColumn.zeros(db.n_transactions))
        db = TransactionDatabase(db.n_transactions, all_labels, cols)
    return db


def dump_csv_matrix(db: TransactionDatabase, fh=None) -> str | None:
    out = fh if fh is not None else io.StringIO()
    writer = _csv.writer(out, lineterminator="\n")
    writer.writerow(db.labels)
    for i in range(db.n_transactions):
        writer.writerow([1 if col.test(i) else 0 for col in db.columns])
    if fh is None:
        return out.getvalue()
    return None


def preprocess(db: TransactionDatabase, sigma) -> tuple[TransactionDatabase, ItemOrder]:
    """Drop infrequent items and reorder survivors by decreasing support.

    Ties are broken by ascending external label so the output is stable
    across runs.  The returned ItemOrder records label and support per
    internal index of the new database.
    """
    thr = threshold(sigma, db.n_transactions)
    kept = [
        (db.columns[j].count(), db.labels[j], j)
        for j in range(db.n_items)
        if db.columns[j].count() >= thr
    ]
    kept.sort(key=lambda e: (-e[0], e[1]))
    labels = tuple(lab for _, lab, _ in kept)
    supports = tuple(s for s, _, _ in kept)
    new_db = TransactionDatabase(
        db.n_transactions, labels, [db.columns[j] for _, _, j in kept]
    )
    return new_db, ItemOrder(labels, supports)


def identity_order(db: TransactionDatabase) -> ItemOrder:
    """ItemOrder matching the database's current column order."""
    return ItemOrder(db.labels, tuple(c.count() for c in db.columns))


def append_item(db: TransactionDatabase, label: int, column: BitColumn) -> TransactionDatabase:
    """New database with one extra column at internal index n.

    Existing columns keep their indices, so trees built on ``db`` remain
    valid for the result.
    """
    if label in db._index:
        raise ContractError(f"label {label} already present")
    if column.length != db.n_transactions:
        raise ContractError(
            f"column length {column.length} != transaction count {db.n_transactions}"
        )
    return TransactionDatabase(
        db.n_transactions, db.labels + (label,), db.columns + (column,)
    )
