from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from poissontrace.weyl import (
    RankMismatch,
    WeylElement,
    closed_form_commutator,
    commutator,
    monomial,
    product_commutator,
    prop17_sum,
    render_weyl,
    sl2_triple,
    tensor_expansion,
)

QS = sympy.symbols("q1:4")


def as_operator(w: WeylElement):
    """p_i -> d/dq_i, q_i -> multiplication: a faithful representation of A_n."""
    qs = QS[: w.n]

    def apply(f):
        out = 0
        for (a, b), c in w.terms.items():
            g = f
            for i, e in enumerate(b):
                g = g * qs[i] ** e
            for i, e in enumerate(a):
                g = sympy.diff(g, qs[i], e)
            out += sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * g
        return sympy.expand(out)

    return apply


def weyl_elements(n):
    exps = st.tuples(*[st.integers(0, 2)] * n)
    return st.dictionaries(st.tuples(exps, exps), st.integers(-3, 3), max_size=3).map(lambda t: WeylElement(n, t))


TEST_FUNCS = [QS[0] ** 3 * QS[1] ** 2 + 2 * QS[1] + 5, QS[0] ** 4 * QS[1] ** 4]


@given(x=weyl_elements(2), y=weyl_elements(2))
def test_product_matches_operator_composition(x, y):
    xy, ox, oy = as_operator(x * y), as_operator(x), as_operator(y)
    for f in TEST_FUNCS:
        assert xy(f) == ox(oy(f))


@given(x=weyl_elements(2), y=weyl_elements(2), z=weyl_elements(2))
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


def test_canonical_relation():
    p, q = WeylElement.p(1, 0), WeylElement.q(1, 0)
    assert commutator(p, q) == 1
    assert commutator(p, q * q) == q * 2
    assert render_weyl(q * p) == "p1*q1 - 1"


@pytest.mark.parametrize("n", [1, 3, 5])
def test_signed_sum_is_two(n):
    assert prop17_sum(n) == 2


def test_signed_sum_rejects_even():
    with pytest.raises(ValueError):
        prop17_sum(2)


@pytest.mark.parametrize("k", range(1, 6))
def test_closed_form(k):
    assert product_commutator(k) == closed_form_commutator(k)


def test_sl2_triple_relations():
    E, F, H = sl2_triple(2, 1)
    assert commutator(E, F) == H
    assert commutator(H, E) == E * 2
    assert commutator(H, F) == F * -2


def test_tensor_expansion_size():
    t = tensor_expansion(3)
    assert len(t) == 8 and sorted(set(t.values())) == [-1, 1]


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        WeylElement.p(1, 0) * WeylElement.p(2, 0)
    with pytest.raises(RankMismatch):
        monomial(2, [0]) + WeylElement(3)
