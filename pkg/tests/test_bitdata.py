import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefixmine.bitdata import (
    BitColumn,
    TransactionDatabase,
    append_item,
    dump_csv_matrix,
    dump_horizontal,
    intersect,
    load_csv_matrix,
    load_horizontal,
    preprocess,
    support,
    threshold,
)
from prefixmine.errors import ContractError, FormatError

# D5 row membership, transaction i = bit i
D5_MEMBERS = {1: {0, 1, 3}, 2: {0, 1, 2, 4}, 3: {1, 2}}


class TestLoadHorizontal:
    def test_d5(self, d5):
        assert d5.n_transactions == 5
        assert d5.n_items == 3
        assert d5.labels == (1, 2, 3)
        assert [support(c) for c in d5.columns] == [3, 4, 2]
        for lab, members in D5_MEMBERS.items():
            assert set(d5.column_of(lab).indices()) == members

    def test_empty_stream(self):
        db = load_horizontal("")
        assert db.n_transactions == 0
        assert db.n_items == 0

    def test_duplicate_labels_dedup(self):
        db = load_horizontal("7 7 7\n")
        assert db.n_transactions == 1
        assert db.n_items == 1
        assert support(db.column_of(7)) == 1

    def test_blank_lines_warn_and_skip(self):
        with pytest.warns(UserWarning, match="2 blank"):
            db = load_horizontal("1 2\n\n3\n   \n")
        assert db.n_transactions == 2

    def test_malformed_token_reports_line(self):
        with pytest.raises(FormatError, match="line 2"):
            load_horizontal("1 2\n1 x\n")

    def test_negative_label_rejected(self):
        with pytest.raises(FormatError):
            load_horizontal("1 -2\n")

    def test_file_object(self):
        db = load_horizontal(io.StringIO("4 5\n"))
        assert db.labels == (4, 5)

    def test_roundtrip(self, d5):
        again = load_horizontal(dump_horizontal(d5))
        assert again == d5


class TestCsvMatrix:
    def test_roundtrip(self, d5):
        again = load_csv_matrix(dump_csv_matrix(d5))
        assert again == d5

    def test_bad_cell(self):
        with pytest.raises(FormatError):
            load_csv_matrix("1,2\n0,2\n")

    def test_empty_column_kept(self):
        db = load_csv_matrix("1,2\n1,0\n")
        assert db.labels == (1, 2)
        assert support(db.column_of(2)) == 0


class TestIntersectSupport:
    def test_d5_pair(self, d5):
        both = intersect(d5.column_of(1), d5.column_of(2))
        assert set(both.indices()) == D5_MEMBERS[1] & D5_MEMBERS[2]
        assert support(both) == 2

    def test_idempotent(self, d5):
        a = d5.column_of(1)
        assert intersect(a, a) == a

    def test_all_ones_identity(self, d5):
        ones = BitColumn.ones(5)
        for col in d5.columns:
            assert intersect(col, ones) == col

    def test_length_mismatch(self):
        with pytest.raises(ContractError):
            intersect(BitColumn.ones(4), BitColumn.ones(5))

    def test_support_examples(self, d5):
        assert support(d5.column_of(2)) == 4
        assert support(BitColumn.zeros(9)) == 0
        assert support(BitColumn.ones(5)) == 5

    @given(st.integers(0, 2**40 - 1), st.integers(0, 2**40 - 1), st.integers(0, 2**40 - 1))
    def test_commutative_associative(self, x, y, z):
        a, b, c = (BitColumn(v, 40) for v in (x, y, z))
        assert intersect(a, b) == intersect(b, a)
        assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))

    @given(st.integers(0, 2**40 - 1), st.integers(0, 2**40 - 1))
    def test_anti_monotone(self, x, y):
        a, b = BitColumn(x, 40), BitColumn(y, 40)
        assert support(intersect(a, b)) <= min(support(a), support(b))


class TestThreshold:
    def test_examples(self):
        assert threshold(0.4, 5) == 2
        assert threshold(0.0, 5) == 0
        assert threshold(1.0, 5) == 5

    def test_matches_inequality(self):
        # supp >= ceil(sigma*N) iff supp >= sigma*N, for integer supp
        for n in range(0, 30):
            for num in range(0, 11):
                thr = threshold(num / 10, n)
                for supp in range(n + 1):
                    assert (supp >= thr) == (supp * 10 >= num * n)

    def test_out_of_range(self):
        with pytest.raises(ContractError):
            threshold(1.5, 10)
        with pytest.raises(ContractError):
            threshold(-0.1, 10)


class TestPreprocess:
    def test_d5_order(self, d5):
        db, order = preprocess(d5, 0.4)
        assert order.labels == (2, 1, 3)
        assert order.supports == (4, 3, 2)
        assert db.labels == (2, 1, 3)

    def test_d5_strict(self, d5):
        db, order = preprocess(d5, 0.7)
        assert order.labels == (2,)

    def test_sigma_zero_keeps_all(self, d5):
        db, order = preprocess(d5, 0.0)
        assert set(order.labels) == {1, 2, 3}
        sup = list(order.supports)
        assert sup == sorted(sup, reverse=True)

    def test_tie_break_by_label(self):
        db = TransactionDatabase.from_transactions([{9, 4}, {9, 4}, {2}])
        _, order = preprocess(db, 0.0)
        assert order.labels == (4, 9, 2)

    def test_supports_non_increasing(self, db_suite_small):
        for db in db_suite_small[:10]:
            _, order = preprocess(db, 0.1)
            sup = list(order.supports)
            assert sup == sorted(sup, reverse=True)


class TestAppendItem:
    def test_append(self, d5):
        col = BitColumn.from_indices([4], 5)
        db = append_item(d5, 4, col)
        assert db.n_items == 4
        assert db.labels == (1, 2, 3, 4)
        assert support(db.column_of(4)) == 1
        assert d5.n_items == 3  # original untouched

    def test_duplicate_label(self, d5):
        with pytest.raises(ContractError):
            append_item(d5, 2, BitColumn.zeros(5))

    def test_length_mismatch(self, d5):
        with pytest.raises(ContractError):
            append_item(d5, 4, BitColumn.zeros(4))
