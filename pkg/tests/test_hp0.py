import json

import pytest

from poissontrace.cases import a2, all_pm1_subgroups, b2, cyclic, g2, pm1, z3
from poissontrace.hp0 import (
    NotHomogeneousError,
    NotInvariantError,
    bracket_span_basis,
    hp0,
    hp0_paper_mode,
    hp0_scan,
    in_bracket_span,
)
from poissontrace.exactalg import rank


@pytest.mark.parametrize("n", [2, 3])
def test_cyclic_per_degree(n):
    rep = hp0_scan(cyclic(n))
    assert rep.contributing_degrees() == list(range(0, 2 * n - 3, 2))
    assert rep.total == n - 1 and rep.trailing_zeros


def test_b2_both_modes_agree():
    rep = hp0(b2(), "both", 10)
    assert rep.agreement and rep.total == 2
    # g.D = -D, so only the powers D^(2m) are invariant
    assert [rep.methods[d] for d in (0, 2, 4, 8)] == ["obstructed", "isotypic", "obstructed", "certified"]
    assert json.loads(rep.dumps())["total"] == 2


def test_a2_paper_mode_certifies_every_positive_degree():
    rep = hp0_paper_mode(a2(), 8)
    assert rep.per_degree == {d: int(d == 0) for d in range(9)}
    assert [rep.methods[d] for d in (2, 4, 6, 8)] == ["isotypic", "certified", "isotypic", "certified"]


def test_monomial_span_gives_the_same_cokernel():
    case = b2()
    for d in (2, 4, 6):
        mono = bracket_span_basis(case, d, "monomial")
        assert len(mono) == len(bracket_span_basis(case, d, "invariant"))
        assert case.action.degree_cell(d).dim - rank(mono) == int(d == 4)


def test_pm1_dichotomy_small():
    for gens in all_pm1_subgroups(2):
        case = pm1(2, gens)
        assert hp0_scan(case).total == case.expected_hp0


def test_z3_modes_agree():
    rep = hp0(z3(2), "both")
    assert rep.agreement and rep.total == 2


def test_membership_guards():
    case = b2()
    x1, y1 = case.parse("x1"), case.parse("y1")
    with pytest.raises(NotInvariantError):
        in_bracket_span(case, x1 * x1)
    with pytest.raises(NotHomogeneousError):
        in_bracket_span(case, x1 * y1 + 1)
    with pytest.raises(ValueError):
        in_bracket_span(a2(), x1)
    assert in_bracket_span(case, case.vars.zero())
    assert not in_bracket_span(case, case.vars.one())


def test_paper_mode_needs_sl2_or_torus():
    case = g2()
    rep = hp0_paper_mode(case, 12)
    assert rep.contributing_degrees() == [0, 4, 8]
    with pytest.raises(ValueError):
        hp0(case, "sideways", 4)
