"""Incremental frequent-itemset and association-rule mining on a prefix tree.

The tree of frequent itemsets is grown one item at a time; adding an item
to a finished tree, dropping the oldest item, and sliding a fixed-size
window of items are all cheap updates rather than re-mines.  Supports are
counted bit-parallel over packed transaction columns.
"""

from .arm import Rule, RuleTree, arm_traversal, emit_rules, mine_rules, rule
from .bitdata import (
    BitColumn,
    ItemOrder,
    TransactionDatabase,
    append_item,
    dump_horizontal,
    intersect,
    load_csv_matrix,
    load_horizontal,
    preprocess,
    support,
    threshold,
)
from .fim import MineConfig, fim_traversal, mine
from .oracle import brute_fim, brute_rules
from .preftree import PrefTree, dump_tree, load_tree, validate_tree
from .synth import GenProfile, dense_profile, gen_ar3, gen_bernoulli, sparse_profile, stats
from .window import WindowState, add_item, marm, mfim, remove_first

__version__ = "0.1.0"

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
    "PrefTree",
    "dump_tree",
    "load_tree",
    "validate_tree",
    "MineConfig",
    "fim_traversal",
    "mine",
    "Rule",
    "RuleTree",
    "rule",
    "emit_rules",
    "arm_traversal",
    "mine_rules",
    "WindowState",
    "add_item",
    "remove_first",
    "mfim",
    "marm",
    "GenProfile",
    "sparse_profile",
    "dense_profile",
    "gen_bernoulli",
    "gen_ar3",
    "stats",
    "brute_fim",
    "brute_rules",
    "__version__",
]
