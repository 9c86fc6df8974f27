"""sl(2)-triples inside invariant rings, lowering chains and trace certificates.

Given E, F, H in S^G(2) spanning a copy of sl(2) under the bracket and a
generator D of the sl(2)-invariants of degree 2, a pair of highest-weight
invariants P, Q of equal weight produces, for every k, an explicit element
sum_i (-1)^i {P_i, Q_{beta-i} D^k} = (lam + k mu) D^(alpha+k) of the bracket
span.  This module builds the chains, extracts lam and mu by exact division,
and re-derives the identity for each k.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import format_rat, nullspace
from .poisson import PoissonStructure, bracket
from .polyring import Poly, divide, render


class Sl2IdentityError(ArithmeticError):
    """A defining identity of the sl(2) context fails; ``identity`` names it."""

    def __init__(self, identity: str, residual: Poly):
        super().__init__(f"{identity} fails, residual {render(residual)}")
        self.identity = identity
        self.residual = residual


class ChainError(ValueError):
    pass


class CertificateMismatch(ArithmeticError):
    """An alternating chain sum is not the predicted multiple of a power of D."""


def _scalar_ratio(f: Poly, g: Poly) -> Optional[Fraction]:
    """c with f = c*g, or None when f is not a multiple of g."""
    if not g:
        return None
    if not f:
        return Fraction(0)
    k, c = g.leading()
    ratio = Fraction(f.terms.get(k, 0)) / c
    return ratio if f == g.scale(ratio) else None


class Sl2Context:
    """An sl(2)-triple (E, F, H) and the degree-2 invariant D, attached to a group action."""

    def __init__(self, ps: PoissonStructure, action, E: Poly, F: Poly, H: Poly, D: Poly):
        self.ps = ps
        self.action = action
        self.E, self.F, self.H, self.D = E, F, H, D
        scalars = []
        for img in action.generator_images(D) if hasattr(action, "generator_images") else []:
            c = _scalar_ratio(img, D)
            if c is None:
                raise ValueError("a group generator does not send D to a multiple of D")
            scalars.append(c)
        self.kappa = scalars
        self.N = self._order(scalars)

    @staticmethod
    def _order(scalars: List[Fraction]) -> int:
        for c in scalars:
            if abs(c) != 1:
                raise ValueError(f"g.D = {c}*D is not a rational root of unity")
        return 2 if any(c == -1 for c in scalars) else 1

    def ad(self, which: str, f: Poly) -> Poly:
        return bracket(self.ps, getattr(self, which), f)


def verify_triple(ctx: Sl2Context, strict: bool = True) -> Dict[str, Poly]:
    """Residual of every defining identity; raise on the first failure when ``strict``."""
    ps = ctx.ps
    E, F, H, D = ctx.E, ctx.F, ctx.H, ctx.D
    res: Dict[str, Poly] = {
        "{E,F}=H": bracket(ps, E, F) - H,
        "{H,E}=2E": bracket(ps, H, E) - E.scale(2),
        "{H,F}=-2F": bracket(ps, H, F) + F.scale(2),
        "{E,D}=0": bracket(ps, E, D),
        "{F,D}=0": bracket(ps, F, D),
        "{H,D}=0": bracket(ps, H, D),
    }
    for name, f in (("E", E), ("F", F), ("H", H)):
        for gi, img in enumerate(ctx.action.generator_images(f)):
            res[f"g{gi}.{name}={name}"] = img - f
    DN = D ** ctx.N
    for gi, img in enumerate(ctx.action.generator_images(DN)):
        res[f"g{gi}.D^N=D^N"] = img - DN
    for name, v in zip(ps.vars.names, ps.vars.gens()):
        w = 1 if ps.vars.side[ps.vars.index[name]] == "x" else -1
        res[f"{{H,{name}}}={w}*{name}"] = bracket(ps, H, v) - v.scale(w)
    if strict:
        for name, r in res.items():
            if r:
                raise Sl2IdentityError(name, r)
    return res


def _ad_matrix_kernel(ps: PoissonStructure, ops: Sequence[Poly], polys: List[Poly]) -> List[Poly]:
    """Basis of the common kernel of ad(X), X in ops, on the span of polys."""
    blocks = [[bracket(ps, X, p) for p in polys] for X in ops]
    rows = []
    for images in blocks:
        keys = sorted({k for im in images for k in im.terms})
        pos = {k: i for i, k in enumerate(keys)}
        # columns are the images; solve sum c_p image_p = 0
        block = [[0] * len(polys) for _ in keys]
        for j, im in enumerate(images):
            for k, c in im.terms.items():
                block[pos[k]][j] = c
        rows.extend(block)
    ring = ps.vars
    out = []
    for vec in nullspace(rows, len(polys)):
        acc = ring.zero()
        for c, p in zip(vec, polys):
            if c:
                acc = acc + p.scale(c)
        out.append(acc)
    return out


def sl2_invariants(ctx: Sl2Context, polys: List[Poly]) -> List[Poly]:
    """Basis of the vectors in span(polys) killed by both ad(E) and ad(F)."""
    return _ad_matrix_kernel(ctx.ps, [ctx.E, ctx.F], polys)


def highest_weight_vectors(case, d: int) -> List[Tuple[Poly, int]]:
    """Basis of ker ad(E) on S^G(d), each element tagged with its H-weight."""
    ctx = case.sl2
    ps = case.structure
    out = []
    for i in range(d, -1, -1):
        j = d - i
        cell = case.action.cell(i, j)
        if not cell.dim:
            continue
        for v in _ad_matrix_kernel(ps, [ctx.E], cell.polys):
            w = i - j
            if bracket(ps, ctx.H, v) != v.scale(w):
                raise ChainError(f"vector of bidegree {(i, j)} is not an H-eigenvector of weight {w}")
            out.append((v, w))
    return out


@dataclass
class LoweringChain:
    beta: int
    entries: List[Poly]


def lowering_chain(ctx: Sl2Context, P: Poly, beta: int) -> LoweringChain:
    ps = ctx.ps
    if bracket(ps, ctx.E, P):
        raise ChainError("ad(E) does not kill P")
    if bracket(ps, ctx.H, P) != P.scale(beta):
        raise ChainError(f"P is not of H-weight {beta}")
    entries = [P]
    for _ in range(beta):
        entries.append(bracket(ps, ctx.F, entries[-1]))
    if bracket(ps, ctx.F, entries[-1]):
        raise ChainError("ad(F) does not kill the last chain entry")
    return LoweringChain(beta, entries)


def _divide_by_power(f: Poly, D: Poly, e: int) -> Fraction:
    """Exact scalar c with f = c * D^e, via repeated exact division."""
    q = f
    for _ in range(e):
        q, r = divide(q, D)
        if r:
            raise CertificateMismatch("remainder after division by D")
    if q.degree() > 0:
        raise CertificateMismatch(f"quotient by D^{e} is not a constant: {render(q)}")
    return Fraction(q.terms.get(0, 0))


def _alpha(P: Poly, Q: Poly) -> int:
    s = P.degree() + Q.degree() - 2
    if s % 2:
        raise ChainError("(deg P + deg Q - 2)/2 is not an integer")
    return s // 2


def prop5_sums(ctx: Sl2Context, P: Poly, Q: Poly, beta: int):
    cp = lowering_chain(ctx, P, beta).entries
    cq = cp if Q is P else lowering_chain(ctx, Q, beta).entries
    ps = ctx.ps
    ring = ps.vars
    lam_sum = ring.zero()
    mu_sum = ring.zero()
    for i in range(beta + 1):
        term_l = bracket(ps, cp[i], cq[beta - i])
        term_m = bracket(ps, cp[i], ctx.D) * cq[beta - i]
        if i % 2:
            lam_sum, mu_sum = lam_sum - term_l, mu_sum - term_m
        else:
            lam_sum, mu_sum = lam_sum + term_l, mu_sum + term_m
    return cp, cq, lam_sum, mu_sum


def prop5_constants(ctx: Sl2Context, P: Poly, Q: Poly, beta: int) -> Tuple[Fraction, Fraction, int]:
    """(lam, mu, alpha) for the highest-weight pair (P, Q) of weight beta."""
    alpha = _alpha(P, Q)
    _, _, lam_sum, mu_sum = prop5_sums(ctx, P, Q, beta)
    lam = _divide_by_power(lam_sum, ctx.D, alpha)
    mu = _divide_by_power(mu_sum, ctx.D, alpha + 1)
    return lam, mu, alpha


@dataclass
class Certificate:
    exponent: int
    k: int
    lam: Fraction
    mu: Fraction
    alpha: int
    beta: int
    coefficient: Fraction
    p_chain: List[str]
    q_chain: List[str]
    identity_hash: str
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "k": self.k,
            "lambda": format_rat(self.lam),
            "mu": format_rat(self.mu),
            "alpha": self.alpha,
            "beta": self.beta,
            "coefficient": format_rat(self.coefficient),
            "p_chain": self.p_chain,
            "q_chain": self.q_chain,
            "identity_hash": self.identity_hash,
        }


def prop5_certify(ctx: Sl2Context, P: Poly, Q: Poly, beta: int, k: int, constants=None) -> Optional[Certificate]:
    """Certificate that D^(alpha+k) lies in the bracket span, or None.

    The left side sum_i (-1)^i {P_i, Q_{beta-i} D^k} is recomputed directly
    and must equal (lam + k mu) D^(alpha+k); a mismatch raises
    :class:`CertificateMismatch`.  No certificate is issued when lam + k mu = 0 or
    when D^k (hence Q_j D^k) or D^(alpha+k) is not invariant.
    """
    lam, mu, alpha = constants if constants is not None else prop5_constants(ctx, P, Q, beta)
    cp = lowering_chain(ctx, P, beta).entries
    cq = cp if Q is P else lowering_chain(ctx, Q, beta).entries
    ps = ctx.ps
    Dk = ctx.D ** k
    lhs = ps.vars.zero()
    for i in range(beta + 1):
        term = bracket(ps, cp[i], cq[beta - i] * Dk)
        lhs = lhs - term if i % 2 else lhs + term
    coeff = lam + k * mu
    rhs = (ctx.D ** (alpha + k)).scale(coeff)
    if lhs != rhs:
        raise CertificateMismatch(f"direct recomputation disagrees at k={k}")
    if coeff == 0 or k % ctx.N or (alpha + k) % ctx.N:
        return None
    digest = hashlib.sha256(render(lhs).encode()).hexdigest()
    return Certificate(
        exponent=alpha + k,
        k=k,
        lam=lam,
        mu=mu,
        alpha=alpha,
        beta=beta,
        coefficient=coeff,
        p_chain=[render(e) for e in cp],
        q_chain=[render(e) for e in cq],
        identity_hash=digest,
    )


def certificate_json(cert: Certificate) -> str:
    return json.dumps(cert.to_json(), sort_keys=True)
