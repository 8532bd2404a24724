"""Association rule generation alongside frequent-itemset discovery.

For a frequent itemset C, the antecedent tree of C holds every A subset of
C whose rule A => C \\ A clears the confidence threshold.  Children of C
remove one item each; deeper nodes arise as intersections of a node with
its left siblings, removing one more item per level.  Confidence grows as
antecedents shrink their complements (supp(A') >= supp(A) for A' subset of
A never happens -- the other way: losing items from A can only raise
supp(A), lowering supp(C)/supp(A)), so a failed antecedent need not be
extended: exactly the anti-monotone pruning the tree encodes.

Confidences are exact rationals; decimals are rendered only at output.
"""

from __future__ import annotations

import csv as _csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import bitdata
from .bitdata import ItemOrder, TransactionDatabase, as_fraction
from .errors import ConsistencyError, ContractError
from .fim import MineConfig, fim_traversal
from .preftree import PrefTree

__all__ = [
    "Rule",
    "RuleNode",
    "RuleTree",
    "rule",
    "emit_rules",
    "arm_traversal",
    "mine_rules",
    "format_rule_line",
    "rules_to_csv",
]

Itemset = tuple[int, ...]
SupportLookup = Callable[[Itemset], "int | None"]


@dataclass(frozen=True)
class Rule:
    """A => B with B the consequent; support is supp(A | B)."""

    antecedent: Itemset
    consequent: Itemset
    support: int
    confidence: Fraction

    def __post_init__(self):
        if not self.antecedent:
            raise ContractError("rule antecedent must be nonempty")
        if not self.consequent:
            raise ContractError("rule consequent must be nonempty")
        if set(self.antecedent) & set(self.consequent):
            raise ContractError("antecedent and consequent must be disjoint")

    def __str__(self) -> str:
        return format_rule_line(self)


class RuleNode:
    __slots__ = ("itemset", "confidence", "children", "parent")

    def __init__(self, itemset: Itemset, confidence: Fraction, parent=None):
        self.itemset = itemset
        self.confidence = confidence
        self.children: list[RuleNode] = []
        self.parent = parent


class RuleTree:
    """Antecedent tree of one frequent itemset C (the root)."""

    def __init__(self, c: Itemset, support: int):
        self.c = c
        self.support = support
        self.root = RuleNode(c, Fraction(1))

    def rdfs(self) -> Iterator[RuleNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def node_count(self) -> int:
        return sum(1 for _ in self.rdfs())

    def antecedents(self) -> set[Itemset]:
        return {node.itemset for node in self.rdfs() if node is not self.root}


def rule(c: Itemset, tau, supports: SupportLookup) -> RuleTree:
    """Antecedent tree of C at confidence threshold tau.

    ``supports`` must resolve every subset of C that gets tested; a miss is
    an internal-consistency error, since subsets of a frequent itemset are
    always frequent and mined first.  A zero-support C yields no antecedents
    (its confidences would be 0/0).

    Children are ordered so that removing a larger item lands further left,
    mirroring the prefix-tree convention; each node is then intersected
    with its left siblings only, which reaches every confident antecedent
    exactly once.
    """
    if any(a >= b for a, b in zip(c, c[1:])):
        raise ContractError(f"itemset must be strictly increasing, got {c}")
    supp_c = supports(c)
    if supp_c is None:
        raise ConsistencyError(f"support of {c} is unavailable")
    tree = RuleTree(c, supp_c)
    if supp_c == 0 or len(c) < 2:
        return tree
    tau_frac = as_fraction(tau)

    def confident(itemset: Itemset) -> Fraction | None:
        supp_a = supports(itemset)
        if supp_a is None:
            raise ConsistencyError(f"support of {itemset} is unavailable")
        conf = Fraction(supp_c, supp_a)
        return conf if conf >= tau_frac else None

    # step 1: children of C remove one item each, largest removal leftmost
    for removed in reversed(range(len(c))):
        cand = c[:removed] + c[removed + 1 :]
        conf = confident(cand)
        if conf is not None:
            tree.root.children.append(RuleNode(cand, conf, tree.root))

    # step 2: RDFS; intersect each node with its left siblings
    stack = list(tree.root.children)  # leftmost deepest => rightmost first
    while stack:
        node = stack.pop()
        if len(node.itemset) >= 2:
            siblings = node.parent.children
            own = set(node.itemset)
            for brother in siblings[: siblings.index(node)]:
                meet = tuple(x for x in node.itemset if x in set(brother.itemset))
                if len(meet) != len(node.itemset) - 1:
                    raise ConsistencyError("sibling intersection lost more than one item")
                conf = confident(meet)
                if conf is not None:
                    node.children.append(RuleNode(meet, conf, node))
        stack.extend(node.children)
    return tree


def emit_rules(rt: RuleTree, labels: Sequence[int] | None = None) -> list[Rule]:
    """One rule per antecedent node, in RDFS order; the trivial rule C => C
    (the root) is excluded.  ``labels`` maps internal indices to external
    labels."""

    def translate(itemset: Itemset) -> Itemset:
        if labels is None:
            return itemset
        return tuple(sorted(labels[i] for i in itemset))

    out = []
    for node in rt.rdfs():
        if node is rt.root:
            continue
        consequent = tuple(x for x in rt.c if x not in set(node.itemset))
        out.append(
            Rule(
                translate(node.itemset),
                translate(consequent),
                rt.support,
                node.confidence,
            )
        )
    return out


def arm_traversal(
    db: TransactionDatabase,
    tree: PrefTree,
    item: int,
    sigma,
    tau,
    *,
    prune: bool = True,
) -> tuple[PrefTree, list[tuple[Itemset, RuleTree]]]:
    """fim_traversal plus an antecedent tree for every node it inserts.

    Subset supports are looked up on the growing tree itself; the LDFS
    discipline guarantees all of them were inserted before (a, item) is.
    """
    tau_frac = as_fraction(tau)
    if tau_frac < 0 or tau_frac > 1:
        raise ContractError(f"tau must be in [0, 1], got {tau}")
    inserted: list = []
    fim_traversal(db, tree, item, sigma, prune=prune, collect=inserted)
    found: list[tuple[Itemset, RuleTree]] = []
    for node in inserted:
        items = node.itemset()
        found.append((items, rule(items, tau_frac, tree.lookup_support)))
    return tree, found


def mine_rules(
    db: TransactionDatabase, sigma, tau, *, preprocess: bool = True
) -> tuple[PrefTree, list[Rule], ItemOrder]:
    """Mine frequent itemsets and their confident rules in one sweep.

    The rule list is flat, in (itemset discovery order, RDFS antecedent
    order), with external labels and exact rational confidences.
    """
    import warnings

    from .fim import SIGMA_ZERO_ITEM_CAP
    from .errors import ResourceLimitError

    MineConfig(sigma, preprocess)  # validates sigma
    if db.n_transactions == 0:
        warnings.warn("mining an empty database: every support is zero", stacklevel=2)
        return PrefTree(0), [], bitdata.identity_order(db)
    if bitdata.threshold(sigma, db.n_transactions) == 0 and db.n_items > SIGMA_ZERO_ITEM_CAP:
        raise ResourceLimitError(
            f"sigma=0 over {db.n_items} items would enumerate 2^{db.n_items} itemsets"
        )
    if preprocess:
        db, order = bitdata.preprocess(db, sigma)
    else:
        order = bitdata.identity_order(db)
    tree = PrefTree(db.n_transactions)
    rules: list[Rule] = []
    seen = set()
    for item in range(db.n_items):
        _, found = arm_traversal(db, tree, item, sigma, tau)
        for _c, rt in found:
            for r in emit_rules(rt, order.labels):
                if r not in seen:
                    seen.add(r)
                    rules.append(r)
    return tree, rules, order


def format_rule_line(r: Rule) -> str:
    """``A1,A2 -> B1,B2 TAB support TAB num/den TAB decimal`` (6 digits)."""
    ant = ",".join(str(x) for x in r.antecedent)
    con = ",".join(str(x) for x in r.consequent)
    conf = r.confidence
    return f"{ant} -> {con}\t{r.support}\t{conf.numerator}/{conf.denominator}\t{float(conf):.6f}"


def rules_to_csv(rules: Sequence[Rule], fh=None) -> str | None:
    out = fh if fh is not None else io.StringIO()
    writer = _csv.writer(out, lineterminator="\n")
    writer.writerow(["antecedent", "consequent", "support", "conf_num", "conf_den", "confidence"])
    for r in rules:
        writer.writerow(
            [
                " ".join(str(x) for x in r.antecedent),
                " ".join(str(x) for x in r.consequent),
                r.support,
                r.confidence.numerator,
                r.confidence.denominator,
                f"{float(r.confidence):.6f}",
            ]
        )
    if fh is None:
        return out.getvalue()
    return None
