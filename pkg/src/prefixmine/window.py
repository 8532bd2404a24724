"""Incremental updates and moving-window mining.

Adding an item to a mined tree is one more traversal pass.  Removing the
oldest item is a single subtree detach: the oldest admitted item is the
root's rightmost child, and every itemset containing it lives in that
subtree.  The moving-window driver keeps a basis of q frequent items,
admitting arrivals that pass the frequency gate and evicting the oldest on
each steady-state admission, for exactly Q replacements.
"""

from __future__ import annotations

import csv as _csv
import io
import itertools
import time
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import bitdata
from .arm import Rule, RuleTree, arm_traversal, emit_rules
from .bitdata import BitColumn, TransactionDatabase, threshold
from .errors import ContractError
from .fim import fim_traversal
from .preftree import Node, PrefTree

__all__ = ["WindowState", "add_item", "remove_first", "mfim", "marm", "window_report_csv"]


@dataclass
class WindowState:
    """Snapshot emitted after each admission.

    The ``tree`` field aliases the live window tree: consume it (compare,
    dump, copy) before advancing the generator.
    """

    step: int
    phase: str  # "warmup" or "steady"
    admitted_label: int
    evicted_label: int | None
    freq_add: int
    freq_del: int
    tree_size: int
    seconds: float
    items_examined: int
    items_admitted: int
    replacements: int
    window_labels: tuple[int, ...]
    tree: PrefTree
    rules_added: list[Rule] | None = None
    rules_retired: list[Rule] | None = None


def add_item(
    db: TransactionDatabase, tree: PrefTree, label: int, sigma, tau=None
):
    """Fold one more item into a mined tree.

    The label must already be a column of ``db`` (use
    :func:`bitdata.append_item` first for a brand-new column).  Returns the
    tree, or ``(tree, rules)`` when a confidence threshold is given.
    """
    try:
        item = db.index_of(label)
    except KeyError:
        raise ContractError(
            f"label {label} is not a database column; append it first"
        ) from None
    if tau is None:
        return fim_traversal(db, tree, item, sigma)
    _, found = arm_traversal(db, tree, item, sigma, tau)
    rules = []
    for _c, rt in found:
        rules.extend(emit_rules(rt, db.labels))
    return tree, rules


def remove_first(tree: PrefTree) -> Node | None:
    """Evict the oldest item: detach the root's rightmost subtree in place.

    Returns the detached subtree root, or None (signalled no-op) when the
    root has no children.  The remaining node set is exactly the frequent
    itemsets over the remaining items.
    """
    detached = tree.del_rightmost()
    if detached is None:
        warnings.warn("remove_first on a tree with no items is a no-op", stacklevel=2)
    return detached


def _subtree_itemsets(detached: Node) -> list[tuple[int, ...]]:
    out = []
    stack = [(detached, (detached.item,))]
    while stack:
        node, items = stack.pop()
        out.append(items)
        for child in reversed(node.children):
            stack.append((child, items + (child.item,)))
    return out


def _as_stream(source) -> tuple[TransactionDatabase | None, Iterator[tuple[int, BitColumn]]]:
    if isinstance(source, TransactionDatabase):
        pairs = ((source.labels[j], source.columns[j]) for j in range(source.n_items))
        return source, iter(pairs)
    return None, iter(source)


def _window_run(source, q: int, Q: int, sigma, tau) -> Iterator[WindowState]:
    if q < 1:
        raise ContractError("window capacity q must be >= 1")
    if Q < 0:
        raise ContractError("replacement count Q must be >= 0")
    store, stream = _as_stream(source)
    incremental = store is None
    if incremental:
        first = next(stream, None)
        if first is None:
            warnings.warn("empty item stream: no admissions", stacklevel=3)
            return
        store = TransactionDatabase(first[1].length, (), ())
        stream = itertools.chain([first], stream)

    thr = threshold(sigma, store.n_transactions)
    tree = PrefTree(store.n_transactions)
    window: list[int] = []  # internal indices, oldest first
    labels: dict[int, int] = {}
    rules_by_c: dict[tuple[int, ...], RuleTree] = {}
    examined = admitted = replacements = 0
    next_index = 0

    for label, col in stream:
        if incremental:
            store = bitdata.append_item(store, label, col)
            item = next_index
            next_index += 1
        else:
            item = store.index_of(label)
        examined += 1
        if col.count() < thr:
            continue  # infrequent arrival: examined, never admitted
        admitted += 1
        labels[item] = label
        evicted_label = None
        freq_del = 0
        retired: list[Rule] | None = None
        added: list[Rule] | None = None
        steady = len(window) >= q

        t0 = time.perf_counter()
        if steady:
            detached = tree.del_rightmost()
            evicted_item = window.pop(0)
            if detached is None or detached.item != evicted_item:
                raise ContractError("window queue and tree disagree on the oldest item")
            evicted_label = labels.pop(evicted_item)
            freq_del = detached.subtree_size()
            if tau is not None:
                retired = []
                for items in _subtree_itemsets(detached):
                    rt = rules_by_c.pop(items, None)
                    if rt is not None:
                        retired.extend(emit_rules(rt, store.labels))
            replacements += 1
        before = tree.size
        if tau is None:
            fim_traversal(store, tree, item, sigma)
        else:
            _, found = arm_traversal(store, tree, item, sigma, tau)
            added = []
            for c_items, rt in found:
                rules_by_c[c_items] = rt
                added.extend(emit_rules(rt, store.labels))
        seconds = time.perf_counter() - t0
        window.append(item)

        yield WindowState(
            step=admitted,
            phase="steady" if steady else "warmup",
            admitted_label=label,
            evicted_label=evicted_label,
            freq_add=tree.size - before,
            freq_del=freq_del,
            tree_size=tree.size,
            seconds=seconds,
            items_examined=examined,
            items_admitted=admitted,
            replacements=replacements,
            window_labels=tuple(labels[j] for j in window),
            tree=tree,
            rules_added=added,
            rules_retired=retired,
        )
        if replacements >= Q and len(window) >= q:
            return

    if len(window) < q:
        warnings.warn(
            f"stream exhausted after admitting {len(window)} of q={q} items",
            stacklevel=3,
        )
    elif replacements < Q:
        warnings.warn(
            f"stream exhausted after {replacements} of Q={Q} replacements",
            stacklevel=3,
        )


def mfim(source, q: int, Q: int, sigma) -> Iterator[WindowState]:
    """Moving frequent-itemset mining over an item stream.

    ``source`` is a TransactionDatabase (items arrive in column order) or
    an iterable of (label, BitColumn) pairs.  Yields one WindowState per
    admission: q warm-up admissions, then Q replacements.
    """
    return _window_run(source, q, Q, sigma, None)


def marm(source, q: int, Q: int, sigma, tau) -> Iterator[WindowState]:
    """Moving association-rule mining: MFIM plus per-step rule deltas.

    Each state lists the rules created for the newly admitted item and the
    rules retired because their itemset contained the evicted item.
    """
    return _window_run(source, q, Q, sigma, tau)


def window_report_csv(states: Iterable[WindowState], fh=None) -> str | None:
    """Per-step report: one row per admission."""
    out = fh if fh is not None else io.StringIO()
    writer = _csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["step", "phase", "admitted_label", "evicted_label", "freq_add", "freq_del", "tree_size", "step_seconds"]
    )
    for s in states:
        writer.writerow(
            [
                s.step,
                s.phase,
                s.admitted_label,
                "" if s.evicted_label is None else s.evicted_label,
                s.freq_add,
                s.freq_del,
                s.tree_size,
                f"{s.seconds:.6f}",
            ]
        )
    if fh is None:
        return out.getvalue()
    return None
