"""Brute-force reference implementations, deliberately simple and slow.

These enumerate every subset outright and share no traversal code with the
tree-based miners; every correctness test in the suite checks the fast path
against them.
"""

from __future__ import annotations

from fractions import Fraction

from .arm import Rule
from .bitdata import TransactionDatabase, as_fraction, threshold
from .errors import ResourceLimitError

__all__ = ["brute_fim", "brute_rules", "MAX_ITEMS"]

MAX_ITEMS = 24


def brute_fim(db: TransactionDatabase, sigma) -> dict[tuple[int, ...], int]:
    """All frequent itemsets by exhaustive enumeration of the 2^n subsets.

    Keys are label tuples (ascending), values are supports.  The empty
    itemset is always included with support N.
    """
    if db.n_items > MAX_ITEMS:
        raise ResourceLimitError(f"{db.n_items} items exceed the 2^{MAX_ITEMS} cap")
    thr = threshold(sigma, db.n_transactions)
    result: dict[tuple[int, ...], int] = {(): db.n_transactions}
    order = sorted(range(db.n_items), key=lambda j: db.labels[j])
    cols = [db.columns[j] for j in order]
    labs = [db.labels[j] for j in order]

    def walk(start: int, vec, items: tuple[int, ...]) -> None:
        for j in range(start, len(cols)):
            v = vec & cols[j]
            s = v.count()
            if s >= thr:
                result[items + (labs[j],)] = s
            walk(j + 1, v, items + (labs[j],))

    from .bitdata import BitColumn

    walk(0, BitColumn.ones(db.n_transactions), ())
    return result


def brute_rules(db: TransactionDatabase, sigma, tau) -> list[Rule]:
    """All confident rules by exhaustive antecedent enumeration.

    For every frequent itemset C with positive support and every nonempty
    proper subset A of C, keeps A => C \\ A iff supp(C)/supp(A) >= tau.
    Zero-support itemsets yield no rules (their confidences are undefined).
    """
    frequent = brute_fim(db, sigma)
    tau_frac = as_fraction(tau)
    rules = []
    for c_items, c_supp in frequent.items():
        if len(c_items) < 2 or c_supp == 0:
            continue
        for mask in range(1, (1 << len(c_items)) - 1):
            antecedent = tuple(
                c_items[i] for i in range(len(c_items)) if mask >> i & 1
            )
            conf = Fraction(c_supp, frequent[antecedent])
            if conf >= tau_frac:
                consequent = tuple(x for x in c_items if x not in antecedent)
                rules.append(Rule(antecedent, consequent, c_supp, conf))
    rules.sort(key=lambda r: (tuple(sorted(r.antecedent + r.consequent)), r.antecedent))
    return rules
