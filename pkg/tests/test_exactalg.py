from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from poissontrace.exactalg import (
    DimensionError,
    Echelon,
    RatMatrix,
    determinant,
    format_rat,
    in_span,
    nullspace,
    parse_rat,
    rank,
    rref,
)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_parse_and_format():
    assert parse_rat("-3/6") == Fraction(-1, 2)
    assert parse_rat(" 7 ") == 7
    assert format_rat(Fraction(4, 2)) == "2"
    assert format_rat(Fraction(-5, 3)) == "-5/3"


def test_matrix_arithmetic():
    a = RatMatrix.from_rows([[1, 2], [3, 4]])
    b = RatMatrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).to_rows() == [[2, 1], [4, 3]]
    assert (a - a) == RatMatrix(2, 2)
    assert a.transpose().to_rows() == [[1, 3], [2, 4]]
    assert (a @ RatMatrix.identity(2)) == a
    with pytest.raises(DimensionError):
        RatMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionError):
        a @ RatMatrix(3, 3)


def test_determinant_small():
    assert determinant(RatMatrix.from_rows([[2, 1], [7, 4]])) == 1
    assert determinant(RatMatrix.from_rows([[1, 2], [2, 4]])) == 0


@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(RatMatrix.from_rows(rows)) == sympy.Matrix(rows).rank()


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(rows):
    assert determinant(RatMatrix.from_rows(rows)) == sympy.Matrix(rows).det()


@given(matrices())
def test_nullspace_is_kernel(rows):
    ncols = len(rows[0])
    basis = nullspace(rows, ncols)
    assert len(basis) == ncols - sympy.Matrix(rows).rank()
    for v in basis:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(matrices())
def test_rref_pivots_and_span(rows):
    ncols = len(rows[0])
    red, pivots = rref(rows, ncols)
    assert len(pivots) == sympy.Matrix(rows).rank()
    for r, p in zip(red, pivots):
        assert r[p] == 1
    for r in rows:
        assert in_span(r, red)


@given(matrices(6, 4))
def test_echelon_incremental_rank(rows):
    ech = Echelon(len(rows[0]))
    for r in rows:
        before = ech.rank
        added = ech.add({i: v for i, v in enumerate(r) if v})
        assert ech.rank == before + int(added)
        assert ech.contains({i: v for i, v in enumerate(r) if v})
    assert ech.rank == sympy.Matrix(rows).rank()


def test_echelon_rejects_dependent_rows():
    ech = Echelon()
    assert ech.add({0: 1, 1: 2})
    assert not ech.add({0: Fraction(1, 2), 1: 1})
    assert not ech.contains({1: 1})
