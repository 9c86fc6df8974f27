"""Constant Poisson structures and their bracket."""

from __future__ import annotations

from typing import Callable, Dict, List, Sequence

from .exactalg import RatMatrix, determinant, format_rat, parse_rat
from .polyring import Poly, VarSet, VarSetMismatch


class StructureError(ValueError):
    pass


class PoissonStructure:
    """Constant bracket with ``pairing[i][j] = {v_i, v_j}``."""

    def __init__(self, vars: VarSet, pairing: RatMatrix):
        n = vars.nvars
        if pairing.rows != n or pairing.cols != n:
            raise StructureError(f"pairing must be {n}x{n}")
        for (i, j), v in pairing.entries.items():
            if pairing[(j, i)] != -v:
                raise StructureError(f"pairing not antisymmetric at ({i}, {j})")
        if determinant(pairing) == 0:
            raise StructureError("pairing is degenerate")
        self.vars = vars
        self.pairing = pairing
        self._rows: List[Dict[int, object]] = pairing.sparse_rows()

    @classmethod
    def standard(cls, vars: VarSet) -> "PoissonStructure":
        entries = {}
        for x, y in vars.pairs:
            entries[(x, y)] = 1
            entries[(y, x)] = -1
        return cls(vars, RatMatrix(vars.nvars, vars.nvars, entries))

    @classmethod
    def from_json(cls, vars: VarSet, rows: Sequence[Sequence[str]]) -> "PoissonStructure":
        return cls(vars, RatMatrix.from_rows([[parse_rat(x) for x in r] for r in rows]))

    def to_json(self) -> List[List[str]]:
        return [[format_rat(x) for x in r] for r in self.pairing.to_rows()]

    def bracket(self, f: Poly, g: Poly) -> Poly:
        return bracket(self, f, g)

    def ad(self, h: Poly) -> Callable[[Poly], Poly]:
        return ad(self, h)


def bracket(ps: PoissonStructure, f: Poly, g: Poly) -> Poly:
    """{f, g} = sum_ij P[i][j] (df/dv_i)(dg/dv_j)."""
    if f.ring != ps.vars or g.ring != ps.vars:
        raise VarSetMismatch("bracket operands do not live on the structure's variables")
    out = ps.vars.zero()
    if not f.terms or not g.terms:
        return out
    dg: Dict[int, Poly] = {}
    for i, row in enumerate(ps._rows):
        if not row:
            continue
        dfi = f.partial(i)
        if not dfi:
            continue
        w = ps.vars.zero()
        for j, p in row.items():
            d = dg.get(j)
            if d is None:
                d = dg[j] = g.partial(j)
            if d:
                w = w + d.scale(p)
        if w:
            out = out + dfi * w
    return out


def ad(ps: PoissonStructure, h: Poly) -> Callable[[Poly], Poly]:
    """The derivation f -> {h, f}."""

    def op(f: Poly) -> Poly:
        return bracket(ps, h, f)

    return op


def ad_power(ps: PoissonStructure, h: Poly, k: int, f: Poly) -> Poly:
    for _ in range(k):
        f = bracket(ps, h, f)
    return f
