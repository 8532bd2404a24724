"""Frequent itemset mining by per-item tree extension.

One pass of :func:`fim_traversal` folds a single item k into an existing
tree of frequent itemsets: every node a of the input tree is a candidate
prefix, and (a, k) is attached as a's leftmost child iff it is frequent.
Because every itemset in the subtree of a contains a's itemset, a failed
candidate prunes the whole subtree for this pass.  Folding the passes over
items 0..n-1 yields the full frequent-itemset tree, and the same pass run
later with a new item updates a finished tree in place.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import gmpy2

from . import bitdata
from .bitdata import BitColumn, ItemOrder, TransactionDatabase, threshold
from .errors import ContractError, ResourceLimitError
from .preftree import Node, PrefTree

__all__ = ["MineConfig", "fim_traversal", "mine", "count_support_of_extension"]

# a zero threshold makes all 2^n itemsets frequent; refuse beyond this
SIGMA_ZERO_ITEM_CAP = 24


@dataclass(frozen=True)
class MineConfig:
    """Mining parameters: relative support threshold and whether to drop
    and reorder items before the first pass (off for streaming use)."""

    sigma: float
    preprocess: bool = True

    def __post_init__(self):
        sig = bitdata.as_fraction(self.sigma)
        if sig < 0 or sig > 1:
            raise ContractError(f"sigma must be in [0, 1], got {self.sigma}")


def count_support_of_extension(path_column: BitColumn, item_column: BitColumn) -> tuple[BitColumn, int]:
    """Observation vector and support of a path extended by one item."""
    vec = bitdata.intersect(path_column, item_column)
    return vec, vec.count()


def _check_sigma_tag(tree: PrefTree, sigma) -> None:
    sig = bitdata.as_fraction(sigma)
    if tree.sigma is None:
        tree.sigma = sig
    elif tree.sigma != sig:
        raise ContractError(
            f"tree was mined at sigma={tree.sigma}, refusing pass at sigma={sig}"
        )


def fim_traversal(
    db: TransactionDatabase,
    tree: PrefTree,
    item: int,
    sigma,
    *,
    prune: bool = True,
    on_visit: Callable[[Node], None] | None = None,
    collect: list[Node] | None = None,
) -> PrefTree:
    """Extend ``tree`` with every frequent (a, item) in place.

    Only nodes of the input tree are visited, in LDFS order; a node whose
    candidate fails hides its whole subtree from this pass (disable with
    ``prune=False``; the result is identical, only more work is done).
    ``on_visit`` is called on every visited node, for instrumentation;
    ``collect`` receives the inserted nodes in discovery order.
    """
    if not 0 <= item < db.n_items:
        raise ContractError(f"item index {item} out of range")
    if item <= tree.max_item:
        raise ContractError(
            f"item {item} does not exceed the largest tree item {tree.max_item}"
        )
    if tree.n_transactions != db.n_transactions:
        raise ContractError("tree and database disagree on transaction count")
    _check_sigma_tag(tree, sigma)

    n = db.n_transactions
    thr = threshold(sigma, n)
    col = db.columns[item].bits
    col_bits = [c.bits for c in db.columns]

    # observation vectors of the current path, one per depth; the root's
    # is all-ones, so depth-1 vectors are the item columns themselves
    vecs = [gmpy2.bit_mask(n)]
    popcount = gmpy2.popcount
    cursor = tree.ldfs()
    for node in cursor:
        depth = cursor.depth
        if depth == 0:
            vec = vecs[0]
            supp = int(popcount(col))
        else:
            if depth == 1:
                vec = col_bits[node.item]
            else:
                vec = vecs[depth - 1] & col_bits[node.item]
            if depth < len(vecs):
                vecs[depth] = vec
            else:
                vecs.append(vec)
            supp = int(popcount(vec & col))
        if on_visit is not None:
            on_visit(node)
        if supp >= thr:
            new = tree.insert_leftmost_child(node, item, supp)
            if collect is not None:
                collect.append(new)
        elif prune:
            cursor.skip_subtree()
    tree.item_count = max(tree.item_count, item + 1)
    return tree


def mine(db: TransactionDatabase, config: MineConfig) -> tuple[PrefTree, ItemOrder]:
    """Mine the whole database: fold fim_traversal over the items in order.

    Returns the frequent-itemset tree and the item order its internal
    indices refer to (the preprocessing permutation, or the database's own
    column order when preprocessing is off).
    """
    if db.n_transactions == 0:
        warnings.warn("mining an empty database: every support is zero", stacklevel=2)
        return PrefTree(0), bitdata.identity_order(db)
    if threshold(config.sigma, db.n_transactions) == 0 and db.n_items > SIGMA_ZERO_ITEM_CAP:
        raise ResourceLimitError(
            f"sigma=0 over {db.n_items} items would enumerate 2^{db.n_items} itemsets"
        )
    if config.preprocess:
        db, order = bitdata.preprocess(db, config.sigma)
    else:
        order = bitdata.identity_order(db)
    tree = PrefTree(db.n_transactions)
    for item in range(db.n_items):
        fim_traversal(db, tree, item, config.sigma)
    return tree, order
