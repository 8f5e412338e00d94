"""
Tests for GF(2) linear algebra.

Covers:
- BitVector / BitMatrix construction and coordinate order
- rank, row space and null space against span enumeration
- solving vA = b and counting solutions
- dependent / independent column searches and their caps
"""
from collections import Counter

import numpy as np
import pytest

from awtc.bitlinalg import (
    BitMatrix,
    BitVector,
    count_solutions,
    dependent_column_check,
    independent_columns,
    left_null_space,
    min_dependent_columns,
    nullity,
    rank,
    row_space_basis,
    select_columns,
    solve_one,
    span_table,
)
from awtc.errors import DimensionMismatchError, DomainError, InstanceTooLargeError


def span_rank(m: BitMatrix) -> int:
    """log2 of the number of distinct row combinations."""
    return len(set(span_table(m.packed).tolist())).bit_length() - 1


# ---------------------------------------------------------------------------
# Vectors and matrices
# ---------------------------------------------------------------------------


def test_bit_string_characters_are_coordinates_in_order():
    v = BitVector.from_string("1101")
    assert v.to_list() == [1, 1, 0, 1]
    assert v.bits == 0b1011
    assert v.weight() == 3
    assert v.to_string() == "1101"
    assert v[3] == 1
    assert BitVector.from_int(0b1011, 4) == v


def test_bitvector_rejects_overflow_and_bad_strings():
    with pytest.raises(DomainError):
        BitVector(2, 0b100)
    with pytest.raises(DomainError):
        BitVector.from_int(4, 2)
    with pytest.raises(DomainError):
        BitVector.from_string("10a")


def test_xor_requires_equal_lengths():
    x = BitVector.from_string("110") ^ BitVector.from_string("011")
    assert x.to_string() == "101"
    with pytest.raises(DimensionMismatchError):
        BitVector.from_string("1") ^ BitVector.from_string("10")


def test_concat_puts_second_vector_after_first():
    v = BitVector.from_string("10").concat(BitVector.from_string("011"))
    assert v.to_string() == "10011"


def test_from_rows_and_array_agree():
    m = BitMatrix.from_rows(["101", "011"])
    assert np.array_equal(m.to_array(), np.array([[1, 0, 1], [0, 1, 1]]))
    assert BitMatrix.from_array(m.to_array()) == m
    assert m.to_strings() == ["101", "011"]


def test_ragged_rows_rejected():
    with pytest.raises(DimensionMismatchError):
        BitMatrix.from_rows(["101", "01"])


def test_vecmul_is_row_vector_times_matrix():
    m = BitMatrix.from_rows(["100", "011"])
    assert m.vecmul(BitVector.from_string("11")).to_string() == "111"
    assert m.vecmul(BitVector.from_string("01")).to_string() == "011"


def test_transpose_and_matmul(rng):
    a = BitMatrix.random(3, 5, rng)
    b = BitMatrix.random(5, 4, rng)
    expected = (a.to_array().astype(int) @ b.to_array().astype(int)) % 2
    assert np.array_equal(a.matmul(b).to_array(), expected)
    assert np.array_equal(a.transpose().to_array(), a.to_array().T)


def test_stacking():
    a = BitMatrix.from_rows(["10"])
    b = BitMatrix.from_rows(["01"])
    assert a.vstack(b) == BitMatrix.identity(2)
    assert a.hstack(b).to_strings() == ["1001"]
    with pytest.raises(DimensionMismatchError):
        a.vstack(BitMatrix.from_rows(["011"]))


# ---------------------------------------------------------------------------
# Rank and spaces
# ---------------------------------------------------------------------------


def test_rank_of_identity_and_zero():
    assert rank(BitMatrix.identity(5)) == 5
    assert rank(BitMatrix.zeros(3, 4)) == 0
    assert rank(BitMatrix.zeros(0, 4)) == 0


def test_rank_matches_span_enumeration(rng):
    for _ in range(50):
        rows, cols = rng.integers(1, 7, size=2)
        m = BitMatrix.random(int(rows), int(cols), rng)
        assert rank(m) == span_rank(m)
        assert nullity(m) == m.rows - rank(m)


def test_row_space_basis_spans_same_space(rng):
    for _ in range(20):
        m = BitMatrix.random(5, 6, rng)
        basis = row_space_basis(m)
        assert basis.rows == rank(m)
        spanned = set(span_table(basis.packed).tolist())
        assert spanned == set(span_table(m.packed).tolist())


def test_left_null_space_annihilates(rng):
    for _ in range(20):
        m = BitMatrix.random(6, 4, rng)
        null = left_null_space(m)
        assert null.rows == m.rows - rank(m)
        assert rank(null) == null.rows
        for i in range(null.rows):
            assert m.vecmul(null.row(i)).bits == 0


def test_select_columns_is_one_based():
    m = BitMatrix.from_rows(["1010", "0110"])
    assert select_columns(m, [1, 3]).to_strings() == ["11", "01"]
    with pytest.raises(DomainError):
        select_columns(m, [3, 1])
    with pytest.raises(DomainError):
        select_columns(m, [0])


# ---------------------------------------------------------------------------
# Linear systems
# ---------------------------------------------------------------------------


def test_solve_one_and_count(rng):
    for _ in range(30):
        a = BitMatrix.random(4, 5, rng)
        v = BitVector(4, int(rng.integers(0, 16)))
        b = a.vecmul(v)
        x = solve_one(a, b)
        assert x is not None
        assert a.vecmul(x) == b
        assert count_solutions(a, b) == 2 ** nullity(a)


def test_count_solutions_matches_enumeration(rng):
    for _ in range(25):
        rows = int(rng.integers(1, 13))
        cols = int(rng.integers(1, 7))
        a = BitMatrix.random(rows, cols, rng)
        images = Counter(
            a.vecmul(BitVector(rows, v)).bits for v in range(1 << rows)
        )
        for target in range(1 << cols):
            assert count_solutions(a, BitVector(cols, target)) == images[target]


def test_rank_plus_nullity_is_row_count(rng):
    for _ in range(25):
        rows = int(rng.integers(1, 11))
        a = BitMatrix.random(rows, int(rng.integers(1, 9)), rng)
        kernel = sum(
            1 for v in range(1 << rows) if a.vecmul(BitVector(rows, v)).bits == 0
        )
        assert kernel == 2 ** nullity(a)
        assert rank(a) + nullity(a) == rows


def test_unsolvable_system():
    a = BitMatrix.from_rows(["10", "10"])
    assert solve_one(a, BitVector.from_string("01")) is None
    assert count_solutions(a, BitVector.from_string("01")) == 0


# ---------------------------------------------------------------------------
# Column searches
# ---------------------------------------------------------------------------


def test_min_dependent_columns_finds_smallest_set():
    # columns: 1 = e1, 2 = e2, 3 = e1 + e2, 4 = e1
    m = BitMatrix.from_rows(["1011", "0110"])
    assert min_dependent_columns(m, 3) == (1, 4)
    assert dependent_column_check(m, [1, 4])
    assert dependent_column_check(m, [1, 2, 3])
    assert not dependent_column_check(m, [1, 2])


def test_min_dependent_columns_zero_column():
    m = BitMatrix.from_rows(["100", "010"])
    assert min_dependent_columns(m, 1) == (3,)


def test_min_dependent_columns_none_within_budget():
    assert min_dependent_columns(BitMatrix.identity(4), 4) is None


def test_min_dependent_columns_budget_checks(monkeypatch):
    from awtc.config import settings

    with pytest.raises(DomainError):
        min_dependent_columns(BitMatrix.identity(3), 4)
    monkeypatch.setattr(settings, "MAX_DEPENDENT_COLUMNS", 2)
    with pytest.raises(InstanceTooLargeError):
        min_dependent_columns(BitMatrix.identity(3), 1)


def test_independent_columns_greedy_leftmost():
    m = BitMatrix.from_rows(["1101", "0111"])
    assert independent_columns(m, 2) == (1, 2)
    assert independent_columns(BitMatrix.from_rows(["1111"]), 2) is None


def test_span_table_orders_by_combination_index():
    table = span_table([0b001, 0b010, 0b100])
    assert table.tolist() == list(range(8))
