"""Planar ordered tree of itemsets.

Nodes store only their extension item (an internal column index) and a
support count; the full itemset of a node is the path of extension items
from the root, which is always strictly increasing.  Children are kept in
left-to-right order with strictly decreasing extension items, so the
leftmost child is the most recently added (largest) item.  This ordering is
what makes the left DFS enumerate every subset before any of its supersets,
and what makes the oldest item sit in the root's rightmost subtree.
"""

from __future__ import annotations

import io
from typing import Callable, Iterator, Sequence

from .errors import ContractError, FormatError

__all__ = ["Node", "PrefTree", "LdfsCursor", "dump_tree", "load_tree", "validate_tree"]


class Node:
    """Tree node: ``item`` is None only for the root."""

    __slots__ = ("item", "support", "children", "parent")

    def __init__(self, item, support: int, parent=None):
        self.item = item
        self.support = support
        self.children: list[Node] = []
        self.parent = parent

    def itemset(self) -> tuple[int, ...]:
        """Strictly increasing internal-index vector read off the root path."""
        items = []
        node = self
        while node.parent is not None:
            items.append(node.item)
            node = node.parent
        items.reverse()
        return tuple(items)

    def subtree_size(self) -> int:
        count = 1
        for child in self.children:
            count += child.subtree_size()
        return count

    def __repr__(self) -> str:
        return f"Node(item={self.item}, support={self.support}, children={len(self.children)})"


class LdfsCursor:
    """Left depth-first iterator with subtree skipping.

    Yields nodes in LDFS order (root first, then leftmost child first).  A
    node's children are captured when the node is yielded, so children
    inserted *at the current node while iterating* are not visited in this
    pass.  Calling :meth:`skip_subtree` makes the next yielded node the
    first one outside the current node's subtree; skipping at the root ends
    the traversal.
    """

    __slots__ = ("_stack", "_pending", "_skip", "current", "depth")

    def __init__(self, root: Node):
        self._stack: list[tuple[Node, int]] = [(root, 0)]
        self._pending: tuple[Node, int, list[Node]] | None = None
        self._skip = False
        self.current: Node | None = None
        self.depth = -1

    def __iter__(self) -> "LdfsCursor":
        return self

    def __next__(self) -> Node:
        if self._pending is not None:
            node, d, children = self._pending
            self._pending = None
            if not self._skip:
                for child in reversed(children):
                    self._stack.append((child, d + 1))
            self._skip = False
        if not self._stack:
            raise StopIteration
        node, d = self._stack.pop()
        self._pending = (node, d, node.children[:])
        self.current = node
        self.depth = d
        return node

    def skip_subtree(self) -> None:
        """Do not descend below the node yielded last."""
        self._skip = True


class PrefTree:
    """Rooted planar tree whose root is the empty itemset with support N."""

    def __init__(self, n_transactions: int):
        self.root = Node(None, n_transactions)
        self.n_transactions = n_transactions
        self.size = 1
        self.max_item = -1  # highest extension item ever inserted
        self.item_count = 0  # internal indices incorporated so far (max + 1)
        self.sigma = None  # threshold tag set by the first mining pass

    def insert_leftmost_child(self, parent: Node, item: int, support: int) -> Node:
        """Attach (parent's itemset, item) as the new leftmost child."""
        if parent.item is not None and item <= parent.item:
            raise ContractError(
                f"extension item {item} must exceed parent item {parent.item}"
            )
        if parent.children and item <= parent.children[0].item:
            raise ContractError(
                f"extension item {item} must exceed leftmost sibling {parent.children[0].item}"
            )
        node = Node(item, support, parent)
        parent.children.insert(0, node)
        self.size += 1
        if item > self.max_item:
            self.max_item = item
            self.item_count = item + 1
        return node

    def del_rightmost(self) -> Node | None:
        """Detach the root's rightmost child and its whole subtree.

        Returns the detached subtree root, or None when the root has no
        children (the signalled no-op).
        """
        if not self.root.children:
            return None
        node = self.root.children.pop()
        node.parent = None
        self.size -= node.subtree_size()
        return node

    def ldfs(self) -> LdfsCursor:
        return LdfsCursor(self.root)

    def rdfs(self) -> Iterator[Node]:
        """Right depth-first order: root first, rightmost child first."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)  # leftmost ends up deepest

    def lookup_support(self, itemset: Sequence[int]) -> int | None:
        """Stored support of an itemset, or None if it is not in the tree."""
        node = self.root
        for item in itemset:
            for child in node.children:
                if child.item == item:
                    node = child
                    break
            else:
                return None
        return node.support

    def enumerate(self, labels: Sequence[int] | None = None) -> list[tuple[tuple[int, ...], int]]:
        """All (itemset, support) pairs in LDFS order.

        With ``labels``, itemsets are translated from internal indices to
        external labels (order within each itemset follows the path).
        """
        out = []
        stack: list[tuple[Node, tuple[int, ...]]] = [(self.root, ())]
        while stack:
            node, items = stack.pop()
            out.append((items, node.support))
            for child in reversed(node.children):
                ext = child.item if labels is None else labels[child.item]
                stack.append((child, items + (ext,)))
        return out

    def copy(self) -> "PrefTree":
        other = PrefTree(self.n_transactions)
        other.max_item = self.max_item
        other.item_count = self.item_count
        other.sigma = self.sigma
        other.size = self.size

        def clone(node: Node, parent: Node | None) -> Node:
            dup = Node(node.item, node.support, parent)
            dup.children = [clone(c, dup) for c in node.children]
            return dup

        other.root = clone(self.root, None)
        return other

    def equals(self, other: "PrefTree") -> bool:
        """Exact structural equality: shape, child order, items, supports."""

        def same(a: Node, b: Node) -> bool:
            if a.item != b.item or a.support != b.support:
                return False
            if len(a.children) != len(b.children):
                return False
            return all(same(x, y) for x, y in zip(a.children, b.children))

        return self.n_transactions == other.n_transactions and same(self.root, other.root)

    def __repr__(self) -> str:
        return f"PrefTree(size={self.size}, items={self.item_count}, N={self.n_transactions})"


def itemset_of(node: Node) -> tuple[int, ...]:
    return node.itemset()


def dump_tree(tree: PrefTree, labels: Sequence[int] | None = None, fh=None) -> str | None:
    """Serialize in LDFS pre-order, one ``depth TAB label TAB support`` line
    per node; the root line is ``0 TAB - TAB N``."""
    out = fh if fh is not None else io.StringIO()
    stack: list[tuple[Node, int]] = [(tree.root, 0)]
    while stack:
        node, d = stack.pop()
        if node.item is None:
            out.write(f"0\t-\t{node.support}\n")
        else:
            lab = node.item if labels is None else labels[node.item]
            out.write(f"{d}\t{lab}\t{node.support}\n")
        for child in reversed(node.children):
            stack.append((child, d + 1))
    if fh is None:
        return out.getvalue()
    return None


def load_tree(source) -> tuple[PrefTree, list[int]]:
    """Parse a tree dump and re-derive the internal item order.

    The root's children right-to-left (oldest first) define internal
    indices 0..m-1; every deeper label must also appear there, which holds
    for any downward-closed tree.  Returns (tree, labels) with ``labels[j]``
    the external label of internal index j.  All structural invariants are
    validated.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("ascii")
    entries: list[tuple[int, int | None, int]] = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 3 tab-separated fields")
        try:
            depth = int(parts[0])
            label = None if parts[1] == "-" else int(parts[1])
            supp = int(parts[2])
        except ValueError:
            raise FormatError(f"line {lineno}: bad field in {line!r}") from None
        entries.append((depth, label, supp))
    if not entries:
        raise FormatError("empty tree dump")
    if entries[0] != (0, None, entries[0][2]) or entries[0][1] is not None:
        raise FormatError("first line must be the root: 0 TAB - TAB N")

    n_transactions = entries[0][2]
    # pass 1: recover the item order from the root's children (pre-order:
    # depth-1 lines appear leftmost first, so reverse for oldest-first)
    depth1 = [lab for depth, lab, _ in entries[1:] if depth == 1]
    order = list(reversed(depth1))
    index = {lab: j for j, lab in enumerate(order)}
    if len(index) != len(order):
        raise FormatError("duplicate root child label in tree dump")

    tree = PrefTree(n_transactions)
    path: list[Node] = [tree.root]
    for depth, label, supp in entries[1:]:
        if label is None:
            raise FormatError("only the first line may be the root")
        if label not in index:
            raise FormatError(f"label {label} at depth {depth} is not a root child")
        if not 1 <= depth <= len(path):
            raise FormatError(f"depth {depth} does not follow pre-order")
        del path[depth:]
        parent = path[-1]
        item = index[label]
        # append on the right: pre-order emits leftmost children first
        if parent.item is not None and item <= parent.item:
            raise FormatError(f"item {label} does not extend its parent")
        if parent.children and item >= parent.children[-1].item:
            raise FormatError(f"children of {parent.itemset()} are not ordered")
        if supp > parent.support:
            raise FormatError(f"support {supp} exceeds parent support {parent.support}")
        node = Node(item, supp, parent)
        parent.children.append(node)
        tree.size += 1
        path.append(node)
    tree.max_item = len(order) - 1
    tree.item_count = len(order)
    labels = list(order)
    validate_tree(tree)
    return tree, labels


def validate_tree(tree: PrefTree) -> None:
    """Check the structural invariants; raises ContractError on violation."""
    seen = 0
    for node in tree.rdfs():
        seen += 1
        if node.support > tree.n_transactions or node.support < 0:
            raise ContractError(f"support out of range at {node.itemset()}")
        prev = None
        for child in node.children:
            if child.parent is not node:
                raise ContractError("broken parent link")
            if node.item is not None and child.item <= node.item:
                raise ContractError(
                    f"child item {child.item} not greater than parent {node.item}"
                )
            if child.support > node.support:
                raise ContractError(
                    f"support grows along edge {node.itemset()} -> {child.itemset()}"
                )
            if prev is not None and child.item >= prev:
                raise ContractError(
                    f"children of {node.itemset()} not strictly decreasing"
                )
            prev = child.item
    if seen != tree.size:
        raise ContractError(f"size counter {tree.size} != actual node count {seen}")
