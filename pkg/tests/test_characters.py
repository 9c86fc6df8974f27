from pathlib import Path

import pytest
import sympy
from hypothesis import given, strategies as st

from poissontrace.cases import a2, b2, cyclic, g2
from poissontrace.characters import (
    CLOSED_FORMS,
    HQ,
    XY,
    BiDimTable,
    CharacterError,
    LaurentQ,
    TruncationError,
    bidim_table,
    case_characters,
    closed_form_mismatches,
    expand_h_series,
    expand_rational,
    obstruction_sum,
    prop6_obstruction,
    render_laurent,
    sl2_character,
    trivial_multiplicity,
)
from poissontrace.polyring import parse_poly

GOLDEN = Path(__file__).parent / "golden"
CASES = {"B2": b2(), "A2": a2(), "G2": g2()}


def _golden(name):
    out = {}
    for line in (GOLDEN / name).read_text().splitlines():
        if line.strip():
            k, v = line.split(": ", 1)
            out[k] = v
    return out


@pytest.mark.parametrize("name", sorted(CASES))
def test_printed_characters(name):
    gold = _golden(f"characters_{name}.txt")
    chis = case_characters(CASES[name], max(int(n) for n in gold))
    for n, text in gold.items():
        assert render_laurent(chis[int(n)]) == text


def test_printed_obstruction_sums():
    for key, text in _golden("obstruction_sums.txt").items():
        name, k = key.split()
        assert render_laurent(obstruction_sum(CASES[name], int(k))) == text


def test_render_laurent_format():
    assert render_laurent(LaurentQ()) == "0"
    assert render_laurent(LaurentQ({0: 1})) == "1"
    assert render_laurent(LaurentQ({2: 3, 1: 1, -1: 1, -10: 2})) == "3q^2 + q + q^{-1} + 2q^{-10}"


@pytest.mark.parametrize("name", sorted(CASES))
def test_characters_are_symmetric_with_dimension_at_one(name):
    case = CASES[name]
    table = bidim_table(case.action, 8)
    for n in range(9):
        chi = sl2_character(table, n)
        assert chi.is_symmetric()
        assert chi.at_one() == case.action.degree_cell(n).dim
        trivial_multiplicity(chi)


def test_obstructions_at_hp0_degrees():
    # D^k escapes the span exactly at the contributing degrees 2k
    assert [prop6_obstruction(CASES["B2"], k) for k in range(4)] == [True, False, True, False]
    assert [prop6_obstruction(CASES["A2"], k) for k in range(4)] == [True, False, False, False]
    assert [prop6_obstruction(CASES["G2"], k) for k in range(5)] == [True, False, True, False, True]
    with pytest.raises(ValueError):
        prop6_obstruction(cyclic(3), 0)


def test_truncation_and_negative_multiplicity():
    table = BiDimTable(3, {(1, 1): 1})
    with pytest.raises(TruncationError):
        sl2_character(table, 4)
    with pytest.raises(TruncationError):
        obstruction_sum(CASES["B2"], 3, bidim_table(CASES["B2"].action, 6))
    with pytest.raises(CharacterError):
        trivial_multiplicity(LaurentQ({2: 1, -2: 1}))


def test_expand_rational_simple():
    one_minus_x = expand_rational(parse_poly("1", XY), parse_poly("1 - x", XY), 6)
    assert all(one_minus_x[(i, 0)] == 1 for i in range(7)) and one_minus_x[(1, 1)] == 0
    sq = expand_rational(parse_poly("1", XY), parse_poly("(1 - x)^2*(1 - y)^2", XY), 8)
    assert all(sq[(i, j)] == (i + 1) * (j + 1) for i in range(9) for j in range(9 - i))
    with pytest.raises(ZeroDivisionError):
        expand_rational(parse_poly("1", XY), parse_poly("x", XY), 3)


@pytest.mark.parametrize("name", [k for k, v in CLOSED_FORMS.items() if v[1] == "xy"])
def test_xy_series_times_denominator_is_numerator(name):
    # sympy multiplies the truncated series back against the denominator
    _, _, num, den = CLOSED_FORMS[name]
    x, y = sympy.symbols("x y")
    bound = 8
    mine = expand_rational(parse_poly(num, XY), parse_poly(den, XY), bound)
    series = sum(mine[c] * x ** c[0] * y ** c[1] for c in mine.cells())
    prod = sympy.Poly(sympy.expand(series * sympy.sympify(den.replace("^", "**"))), x, y)
    target = sympy.Poly(sympy.sympify(num.replace("^", "**")), x, y)
    low = lambda p: {m: c for m, c in p.terms() if sum(m) <= bound}
    assert low(prod) == low(target)


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_closed_forms_match_counts(name):
    case = CASES[CLOSED_FORMS[name][0]]
    assert closed_form_mismatches(name, case, 10) == []


def test_expand_h_series_geometric():
    chis = expand_h_series(parse_poly("q", HQ), parse_poly("q - h*q^2", HQ), 4)
    # 1 / (1 - h q)
    assert [chis[n] for n in range(5)] == [LaurentQ({n: 1}) for n in range(5)]


@given(a=st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5),
       b=st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5))
def test_laurent_ring_laws(a, b):
    A, B = LaurentQ(a), LaurentQ(b)
    assert A * B == B * A
    assert (A + B) - B == A
    assert (A * B).at_one() == A.at_one() * B.at_one()
