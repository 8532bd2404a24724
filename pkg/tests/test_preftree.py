import pytest

from prefixmine.bitdata import load_horizontal
from prefixmine.errors import ContractError, FormatError
from prefixmine.fim import MineConfig, mine
from prefixmine.preftree import PrefTree, dump_tree, load_tree, validate_tree

# figure-checked left-DFS orders of the complete trees over 2 and 3 items
LDFS_PT2 = [(), (2,), (1,), (1, 2)]
LDFS_PT3 = [(), (3,), (2,), (2, 3), (1,), (1, 3), (1, 2), (1, 2, 3)]


def full_tree(n: int) -> PrefTree:
    """Complete tree over items 0..n-1 (every itemset, support 1)."""
    db = load_horizontal(" ".join(str(i) for i in range(1, n + 1)) + "\n")
    tree, _ = mine(db, MineConfig(1.0, preprocess=False))
    return tree


def d5_tree(d5) -> PrefTree:
    tree, _ = mine(d5, MineConfig(0.4, preprocess=False))
    return tree


def ldfs_itemsets(tree, labels=None):
    return [items for items, _ in tree.enumerate(labels)]


class TestItemsetOf:
    def test_root(self):
        tree = PrefTree(5)
        assert tree.root.itemset() == ()

    def test_chain(self):
        tree = PrefTree(5)
        a = tree.insert_leftmost_child(tree.root, 0, 3)
        b = tree.insert_leftmost_child(a, 1, 2)
        assert b.itemset() == (0, 1)

    def test_leftmost_after_inserts(self):
        tree = PrefTree(5)
        for item in range(3):
            tree.insert_leftmost_child(tree.root, item, 1)
        assert tree.root.children[0].itemset() == (2,)


class TestLdfs:
    def test_pt2_order(self):
        tree = full_tree(2)
        assert ldfs_itemsets(tree, (1, 2)) == LDFS_PT2

    def test_pt3_order(self):
        tree = full_tree(3)
        assert ldfs_itemsets(tree, (1, 2, 3)) == LDFS_PT3

    def test_skip_subtree(self):
        tree = full_tree(3)
        seen = []
        cursor = tree.ldfs()
        for node in cursor:
            items = node.itemset()
            seen.append(tuple(i + 1 for i in items))
            if items == (1,):  # label (2,)
                cursor.skip_subtree()
        assert seen == [(), (3,), (2,), (1,), (1, 3), (1, 2), (1, 2, 3)]

    def test_skip_on_root_ends(self):
        tree = full_tree(3)
        cursor = tree.ldfs()
        next(cursor)
        cursor.skip_subtree()
        with pytest.raises(StopIteration):
            next(cursor)

    def test_subset_ordering(self):
        # every subset of a node's itemset present in the tree comes first
        tree = full_tree(4)
        pos = {items: i for i, (items, _) in enumerate(tree.enumerate())}
        for items, rank in pos.items():
            for mask in range(1 << len(items)):
                sub = tuple(items[i] for i in range(len(items)) if mask >> i & 1)
                if sub != items:
                    assert pos[sub] < rank


class TestRdfs:
    def test_pt2(self):
        tree = full_tree(2)
        got = [tuple(i + 1 for i in node.itemset()) for node in tree.rdfs()]
        assert got == [(), (1,), (1, 2), (2,)]

    def test_single_node(self):
        tree = PrefTree(3)
        assert [n.itemset() for n in tree.rdfs()] == [()]

    def test_pt3(self):
        tree = full_tree(3)
        got = [tuple(i + 1 for i in node.itemset()) for node in tree.rdfs()]
        assert got == [(), (1,), (1, 2), (1, 2, 3), (1, 3), (2,), (2, 3), (3,)]


class TestInsert:
    def test_leftmost_insertion_order(self):
        tree = PrefTree(9)
        tree.insert_leftmost_child(tree.root, 0, 5)
        tree.insert_leftmost_child(tree.root, 1, 4)
        assert [c.item for c in tree.root.children] == [1, 0]

    def test_rejects_non_increasing_path(self):
        tree = PrefTree(9)
        node = tree.insert_leftmost_child(tree.root, 1, 5)
        with pytest.raises(ContractError):
            tree.insert_leftmost_child(node, 0, 4)

    def test_rejects_item_not_exceeding_siblings(self):
        tree = PrefTree(9)
        tree.insert_leftmost_child(tree.root, 2, 5)
        with pytest.raises(ContractError):
            tree.insert_leftmost_child(tree.root, 1, 4)

    def test_insert_into_leaf(self):
        tree = PrefTree(9)
        a = tree.insert_leftmost_child(tree.root, 0, 5)
        b = tree.insert_leftmost_child(a, 1, 3)
        c = tree.insert_leftmost_child(b, 2, 2)
        assert c.itemset() == (0, 1, 2)
        assert b.children == [c]


class TestDelRightmost:
    def test_d5(self, d5):
        tree = d5_tree(d5)
        removed = tree.del_rightmost()
        assert removed.item == 0  # label 1, the oldest item
        left = {items for items, _ in tree.enumerate((1, 2, 3))}
        assert left == {(), (2,), (3,), (2, 3)}
        assert tree.size == 4

    def test_root_only_noop(self):
        tree = PrefTree(5)
        assert tree.del_rightmost() is None
        assert tree.size == 1

    def test_full_pt3(self):
        tree = full_tree(3)
        removed = tree.del_rightmost()
        assert removed.subtree_size() == 4  # (1),(1,2),(1,3),(1,2,3)
        assert {i for i, _ in tree.enumerate((1, 2, 3))} == {(), (2,), (3,), (2, 3)}

    def test_removes_exactly_itemsets_with_oldest(self):
        tree = full_tree(4)
        before = {items for items, _ in tree.enumerate()}
        tree.del_rightmost()
        after = {items for items, _ in tree.enumerate()}
        assert before - after == {items for items in before if 0 in items}


class TestLookup:
    def test_d5_pair(self, d5):
        tree = d5_tree(d5)
        assert tree.lookup_support((1, 2)) == 2  # internal (1,2) = labels (2,3)

    def test_root(self, d5):
        tree = d5_tree(d5)
        assert tree.lookup_support(()) == 5

    def test_absent(self, d5):
        tree = d5_tree(d5)
        assert tree.lookup_support((0, 2)) is None  # labels (1,3) infrequent


class TestEnumerate:
    def test_d5_entries(self, d5):
        tree = d5_tree(d5)
        got = dict(tree.enumerate((1, 2, 3)))
        assert got == {(): 5, (1,): 3, (2,): 4, (3,): 2, (1, 2): 2, (2, 3): 2}
        assert len(tree.enumerate()) == 6

    def test_root_only(self):
        tree = PrefTree(7)
        assert tree.enumerate() == [((), 7)]

    def test_after_del(self, d5):
        tree = d5_tree(d5)
        tree.del_rightmost()
        assert len(tree.enumerate()) == 4


class TestStructureProperties:
    def test_full_tree_node_count(self):
        for n in (1, 4, 8, 15):
            assert full_tree(n).size == 2**n

    def test_leaf_characterization(self):
        # leaf <=> last item is n-1 <=> node is its parent's leftmost child
        tree = full_tree(5)
        stack = [(tree.root, ())]
        while stack:
            node, items = stack.pop()
            for child in node.children:
                child_items = items + (child.item,)
                is_leaf = not child.children
                assert is_leaf == (child_items[-1] == 4)
                assert is_leaf == (node.children[0] is child)
                stack.append((child, child_items))

    def test_superset_property(self):
        tree = full_tree(4)
        for start in tree.root.children:
            base = set(start.itemset())
            stack = [start]
            while stack:
                node = stack.pop()
                assert base <= set(node.itemset())
                stack.extend(node.children)

    def test_validate_passes_on_mined(self, d5):
        validate_tree(d5_tree(d5))


class TestDumpLoad:
    def test_root_line(self, d5):
        tree = d5_tree(d5)
        text = dump_tree(tree, (1, 2, 3))
        assert text.splitlines()[0] == "0\t-\t5"

    def test_roundtrip(self, d5):
        tree = d5_tree(d5)
        text = dump_tree(tree, (1, 2, 3))
        loaded, labels = load_tree(text)
        assert labels == [1, 2, 3]
        assert loaded.equals(tree)
        assert dump_tree(loaded, tuple(labels)) == text

    def test_roundtrip_full(self):
        tree = full_tree(4)
        text = dump_tree(tree, (1, 2, 3, 4))
        loaded, labels = load_tree(text)
        assert loaded.equals(tree)

    def test_loader_rejects_broken_support(self):
        text = "0\t-\t5\n1\t1\t9\n"
        with pytest.raises(FormatError):
            load_tree(text)

    def test_loader_rejects_bad_depth(self):
        text = "0\t-\t5\n3\t1\t2\n"
        with pytest.raises(FormatError):
            load_tree(text)

    def test_loader_rejects_unknown_label(self):
        # label 9 appears at depth 2 but is not a root child
        text = "0\t-\t5\n1\t1\t3\n2\t9\t2\n"
        with pytest.raises(FormatError):
            load_tree(text)


class TestCopyEquals:
    def test_copy_is_deep(self, d5):
        tree = d5_tree(d5)
        dup = tree.copy()
        assert dup.equals(tree)
        dup.del_rightmost()
        assert not dup.equals(tree)
        assert tree.size == 6

    def test_equals_catches_support_change(self, d5):
        tree = d5_tree(d5)
        dup = tree.copy()
        dup.root.children[0].support -= 1
        assert not dup.equals(tree)
