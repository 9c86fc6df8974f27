"""Seeded property suites (200 drawn instances each, see conftest)."""

import pytest
from hypothesis import given, strategies as st

from poissontrace.cases import a2, b2, cyclic, g2
from poissontrace.hp0 import ideal_probe, in_bracket_span
from poissontrace.poisson import bracket
from poissontrace.polyring import Poly, monomial_basis
from poissontrace.sl2tools import sl2_invariants
from strategies import homogeneous_polys, polys

B2 = b2()
A2 = a2()
G2 = g2()
STRUCTURES = {"standard": B2.structure, "A2-pairing": A2.structure}


def _br(ps):
    return lambda f, g: bracket(ps, f, g)


# ---------------------------------------------------------------------------
# bracket laws, for the standard and a non-standard constant pairing


def _check_antisymmetry(ps, f, g):
    br = _br(ps)
    assert br(f, g) == -br(g, f)


def _check_leibniz(ps, f, g, h):
    br = _br(ps)
    assert br(f, g * h) == br(f, g) * h + g * br(f, h)


def _check_jacobi(ps, f, g, h):
    br = _br(ps)
    assert br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g)) == 0


def _check_cyclic_identity(ps, a, b, c):
    br = _br(ps)
    assert br(a * b, c) == br(a, b * c) + br(b, c * a)


@pytest.mark.parametrize("which", sorted(STRUCTURES))
@given(data=st.data())
def test_bracket_antisymmetry(which, data):
    ps = STRUCTURES[which]
    f, g = data.draw(polys(ps.vars)), data.draw(polys(ps.vars))
    _check_antisymmetry(ps, f, g)


@pytest.mark.parametrize("which", sorted(STRUCTURES))
@given(data=st.data())
def test_bracket_leibniz(which, data):
    ps = STRUCTURES[which]
    f, g, h = (data.draw(polys(ps.vars, 3, 4)) for _ in range(3))
    _check_leibniz(ps, f, g, h)


@pytest.mark.parametrize("which", sorted(STRUCTURES))
@given(data=st.data())
def test_bracket_jacobi(which, data):
    ps = STRUCTURES[which]
    f, g, h = (data.draw(polys(ps.vars, 3, 4)) for _ in range(3))
    _check_jacobi(ps, f, g, h)


@pytest.mark.parametrize("which", sorted(STRUCTURES))
@given(data=st.data(), a=st.integers(0, 4), b=st.integers(0, 4))
def test_bracket_degree_homogeneity(which, data, a, b):
    ps = STRUCTURES[which]
    f = data.draw(homogeneous_polys(ps.vars, a))
    g = data.draw(homogeneous_polys(ps.vars, b))
    r = bracket(ps, f, g)
    assert not r or (r.is_homogeneous() and r.degree() == a + b - 2)


@pytest.mark.parametrize("which", sorted(STRUCTURES))
@given(data=st.data())
def test_product_bracket_identity(which, data):
    ps = STRUCTURES[which]
    a, b, c = (data.draw(polys(ps.vars, 3, 4)) for _ in range(3))
    _check_cyclic_identity(ps, a, b, c)


# ---------------------------------------------------------------------------
# group elements act by Poisson automorphisms


@pytest.mark.parametrize("case", [B2, A2, G2], ids=["B2", "A2", "G2"])
@given(data=st.data())
def test_group_acts_by_poisson_automorphisms(case, data):
    subs = case.action.substitutions()
    s = subs[data.draw(st.integers(0, len(subs) - 1))]
    f = data.draw(polys(case.vars, 3, 4))
    g = data.draw(polys(case.vars, 3, 4))
    assert s(bracket(case.structure, f, g)) == bracket(case.structure, s(f), s(g))


# ---------------------------------------------------------------------------
# E, F, H act as derivations compatible with the bracket


@pytest.mark.parametrize("case", [B2, A2], ids=["B2", "A2"])
@pytest.mark.parametrize("which", ["E", "F", "H"])
@given(data=st.data())
def test_sl2_action_morphism_laws(case, which, data):
    ps = case.structure
    X = getattr(case.sl2, which)
    f = data.draw(polys(case.vars, 3, 4))
    g = data.draw(polys(case.vars, 3, 4))
    br = _br(ps)
    assert br(X, f * g) == br(X, f) * g + f * br(X, g)
    assert br(X, br(f, g)) == br(br(X, f), g) + br(f, br(X, g))


# ---------------------------------------------------------------------------
# deterministic structural facts


def test_full_ring_sl2_invariants_are_powers_of_D():
    ctx = B2.sl2
    for n in range(13):
        basis = [Poly.from_exps(B2.vars, {e: 1}) for e in monomial_basis(B2.vars, n)]
        ker = sl2_invariants(ctx, basis)
        if n % 2:
            assert ker == []
        else:
            assert len(ker) == 1
            v = ker[0]
            D = ctx.D ** (n // 2)
            # v is a nonzero multiple of D^(n/2)
            (k, c) = next(iter(D.terms.items()))
            assert v == D.scale(v.terms[k] / c)


def test_casimir_b2():
    # exact expansion fixes the sign: -(x1 y2 - x2 y1)^2
    ctx = B2.sl2
    assert ctx.H ** 2 + ctx.E * ctx.F * 4 == -(ctx.D ** 2)


@pytest.mark.parametrize("case", [A2, G2], ids=["A2", "G2"])
def test_casimir_a2_g2(case):
    ctx = case.sl2
    assert ctx.H ** 2 + ctx.E * ctx.F * 4 == (ctx.D ** 2).scale(-1) / 27


def test_cyclic_span_is_not_an_ideal():
    c4 = cyclic(4)
    t1, t2 = c4.parse("x1*y1"), c4.parse("x2*y2")
    assert in_bracket_span(c4, t1 - t2)
    assert not in_bracket_span(c4, (t1 - t2) * t2)
    assert ideal_probe(c4, t1 - t2, t2)["witness"]


def test_b2_casimir_membership():
    ctx = B2.sl2
    for X in (ctx.E, ctx.F, ctx.H):
        assert in_bracket_span(B2, X)
    casimir = ctx.H ** 2 + ctx.E * ctx.F * 4
    assert not in_bracket_span(B2, casimir)
    assert not in_bracket_span(B2, ctx.D ** 2)


def test_g2_casimir_membership():
    ctx = G2.sl2
    for X in (ctx.E, ctx.F, ctx.H):
        assert in_bracket_span(G2, X)
    casimir = ctx.H ** 2 + ctx.E * ctx.F * 4
    assert not in_bracket_span(G2, casimir)


@given(data=st.data())
def test_a2_span_is_augmentation_ideal(data):
    # every invariant of positive degree lies in the span, so no pair is a witness
    d = data.draw(st.integers(1, 6))
    cell = A2.action.degree_cell(d)
    if not cell.dim:
        return
    coeffs = [data.draw(st.integers(-3, 3)) for _ in range(cell.dim)]
    f = A2.vars.zero()
    for c, p in zip(coeffs, cell.polys):
        f = f + p.scale(c)
    assert in_bracket_span(A2, f)
