"""Named invariant generators, relations, bracket tables and module bases.

Relations and table entries are kept as expression strings in generator
names and are checked by substituting the defining polynomials.  Printed
relations that are not bihomogeneous are reported with their residual, and a
corrected form is pinned next to them; the correction is also re-derived
independently by decomposing the left side in a free-module basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .cases import CaseSpec, a2, a3_namespace, b2, cyclic, g2
from .exactalg import Echelon, rref
from .poisson import bracket
from .polyring import Poly, VarSet, eval_expr, parse_poly, render


class GenerationError(AssertionError):
    pass


class ModuleBasisError(AssertionError):
    pass


@dataclass
class NamedGenerators:
    names: List[str]
    polys: List[Poly]

    def __post_init__(self):
        self._index = dict(zip(self.names, self.polys))

    def __getitem__(self, name: str) -> Poly:
        return self._index[name]

    def namespace(self) -> Dict[str, Poly]:
        return dict(self._index)

    def bidegrees(self) -> Dict[str, Tuple[int, int]]:
        return {n: p.bidegree() for n, p in zip(self.names, self.polys)}

    def free_ring(self) -> VarSet:
        return VarSet.free(self.names)

    def subset(self, names: Sequence[str]) -> "NamedGenerators":
        return NamedGenerators(list(names), [self[n] for n in names])


# ---------------------------------------------------------------------------
# generator definitions

A2_DEFS = {
    "S1": "(a1^2 + a2^2 + a1*a2)/9",
    "T1": "(a1*a2^2 + a2*a1^2)/9",
    "U1": "-(a1*b1^2 + a2*b2^2 + a3*b3^2)/9",
    "S2": "(b1^2 + b2^2 + b1*b2)/9",
    "T2": "(b1*b2^2 + b2*b1^2)/9",
    "U2": "-(a1^2*b1 + a2^2*b2 + a3^2*b3)/9",
    "H": "-(2*a1*b1 + a1*b2 + a2*b1 + 2*a2*b2)/9",
}

# the same generators in the alternative printed forms, for cross-checking
A2_ALT_DEFS = {
    "S1": "-(a1*a2 + a2*a3 + a1*a3)/9",
    "T1": "-(a1*a2*a3)/9",
    "U1": "(2*a1*b1*b2 + 2*a2*b1*b2 + a1*b2^2 + a2*b1^2)/9",
    "S2": "-(b1*b2 + b2*b3 + b1*b3)/9",
    "T2": "-(b1*b2*b3)/9",
    "U2": "(2*a1*a2*b1 + 2*a1*a2*b1 + a1^2*b2 + a2^2*b1)/9",
    "H": "-(a1*b1 + a2*b2 + a3*b3)/9",
}

B2_DEFS = {
    "S1": "x1^2 + x2^2",
    "S2": "x1^2*x2^2",
    "T1": "y1^2 + y2^2",
    "T2": "y1^2*y2^2",
    "Z1": "x1*y1 + x2*y2",
    "Z2": "x1*y1*x2*y2",
    "Z3": "x1*y1^3 + x2*y2^3",
    "Z4": "x1^3*y1 + x2^3*y2",
}

G2_DERIVED = {
    "S1": "S1",
    "T1p": "T1^2",
    "S2": "S2",
    "T2p": "T2^2",
    "Z": "T1*T2",
    "H": "H",
    "U11": "T1*U1",
    "U12": "T1*U2",
    "U21": "T2*U1",
    "U22": "T2*U2",
}


def a2_generators(case: Optional[CaseSpec] = None, defs=A2_DEFS) -> NamedGenerators:
    case = case or a2()
    ns = a3_namespace(case.vars)
    names = list(defs)
    return NamedGenerators(names, [parse_poly(defs[n], case.vars, ns) for n in names])


def g2_generators(case: Optional[CaseSpec] = None) -> NamedGenerators:
    case = case or g2()
    base = a2_generators(case).namespace()
    names = list(G2_DERIVED)
    return NamedGenerators(names, [eval_expr(G2_DERIVED[n], base) for n in names])


def b2_generators(case: Optional[CaseSpec] = None) -> NamedGenerators:
    case = case or b2()
    names = list(B2_DEFS)
    return NamedGenerators(names, [parse_poly(B2_DEFS[n], case.vars) for n in names])


def cyclic_generators(n: int, case: Optional[CaseSpec] = None) -> NamedGenerators:
    case = case or cyclic(n)
    exprs = {"t1": "x1*y1", "t2": "x2*y2", "x1n": f"x1^{n}", "y1n": f"y1^{n}", "x2n": f"x2^{n}", "y2n": f"y2^{n}"}
    for a in range(1, n):
        exprs[f"xa{a}"] = f"x1^{a}*x2^{n - a}"
        exprs[f"ya{a}"] = f"y1^{a}*y2^{n - a}"
    exprs["x1y2"] = "x1*y2"
    exprs["x2y1"] = "x2*y1"
    names = list(exprs)
    return NamedGenerators(names, [parse_poly(exprs[k], case.vars) for k in names])


# ---------------------------------------------------------------------------
# relations

A2_RELATIONS = [
    ("H^4", "-4*S1^2*S2^2 - 3*T1*T2*H + 5*S1*S2*H^2 - T1*S2*U1 - S1*T2*U2"),
    ("H*U1", "-3*S1*T2 - S2*U2"),
    ("H*U2", "-3*T1*S2 - S1*U1"),
    ("U1^2", "12*S1*S2^2 - 3*S2*H^2 + 3*T2*U2"),
    ("U2^2", "12*S1^2*S2 - 3*S1*H^2 + 3*T1*U1"),
    ("U1*U2", "9*T1*T2 - 12*S1*S2*H + 3*H^2"),
]

G2_RELATIONS = [
    ("Z^2", "T1p*T2p"),
    ("H^4", "-4*S1^2*S2^2 - 3*Z*H + 5*S1*S2*H^2 - S2*U11 - S1*U22"),
    ("H*U11", "-3*S1*Z - S2*U12"),
    ("H*U12", "-3*S2*T1p - S2*U11"),
    ("H*U21", "-3*S1*T2p - S2*U22"),
    ("H*U22", "-3*S2*Z - S2*U21"),
    ("U11^2", "12*S1*S2^2*T1p - 3*S2*T1p*H^2 + 3*T1p*U22"),
    ("U11*U12", "9*Z*T1p - 12*S1*S2*T1p*H + 3*T1p*H^3"),
    ("U11*U21", "12*S1*S2^2*Z - 3*S2*Z*H^2 + 3*Z*U22"),
    ("U11*U22", "9*Z^2 - 12*S1*S2*Z*H + 3*Z*H^3"),
    ("U12^2", "12*S1^2*S2*T1p - 3*S1*T1p*H^2 + 3*T1p*U11"),
    ("U12*U21", "9*Z^2 - 12*S1*S2*Z*H + 3*Z*H^3"),
    ("U12*U22", "12*S1^2*S2*Z - 3*S1*Z*H^2 + 3*Z*U11"),
    ("U21^2", "12*S1*S2^2*T2p - 3*S2*T2p*H^2 + 3*T2p*U22"),
    ("U21*U22", "9*Z*T2p - 12*S1*S2*T2p*H + 3*T2p*H^3"),
    ("U22^2", "12*S1^2*S2*T2p - 3*S1*T2p*H^2 + 3*T2p*U11"),
    ("Z*U11", "T1p*U21"),
    ("Z*U12", "T1p*U22"),
    ("Z*U21", "T2p*U11"),
    ("Z*U22", "T2p*U12"),
]

B2_RELATIONS = [
    ("Z1^5", "16*S2*T2 - 5*S2*T1^2 - 5*S1^2*T2 + S1^2*T1^2/2 + (3*S1*T1/2)*Z1^2"
             " + (4*S2*T1 - S1^2*T1/2)*Z3 + (4*S1*T2 - S1*T1^2/2)*Z4"),
    ("Z1*Z2", "(S1*T1/4)*Z1 + Z1^3/4 - (S1/4)*Z3 - (T1/4)*Z4"),
    ("Z1*Z3", "-S1*T2 + T1*Z1^2 - T1*Z2"),
    ("Z1*Z4", "-S2*T1 + S1*Z1^2 - S1*Z2"),
    ("Z2^2", "S2*T2"),
    ("Z2*Z3", "(S1*T1^2/4 - S1*T2)*Z1 + (T1/4)*Z1^3 - (S1*T1/4)*Z3 + (T2 - T1^2/4)*Z4"),
    ("Z2*Z4", "(S1^2*T1/4 - S2*T1)*Z1 + (S1/4)*Z1^3 + (S2 - S1^2/4)*Z3 - (S1*T1/4)*Z4"),
    ("Z3^2", "-S1*T1*T2 + (T1^2 - T2)*Z1^2 + (4*T2 - 2*T1^2)*Z2"),
    ("Z3*Z4", "4*S2*T2 - 5*S2*T1^2/4 - 5*S1^2*T2/4 + (5*S1*T1/4)*Z1^2 - Z1^4/4 - (3*S1*T1/2)*Z2"),
    ("Z4^2", "-S1*S2*T1 + (S1^2 - S2)*Z1^2 + (4*S2 - 2*S1^2)*Z2"),
]

# corrected right sides of the printed relations that are not bihomogeneous
CORRECTIONS = {
    "A2": {"U1*U2": "9*T1*T2 - 12*S1*S2*H + 3*H^3"},
    "G2": {
        "H*U12": "-3*S2*T1p - S1*U11",
        "H*U22": "-3*S2*Z - S1*U21",
    },
    "B2": {
        "Z1^5": "(16*S2*T2 - 5*S2*T1^2 - 5*S1^2*T2 + S1^2*T1^2/2)*Z1 + (3*S1*T1/2)*Z1^3"
                " + (4*S2*T1 - S1^2*T1/2)*Z3 + (4*S1*T2 - S1*T1^2/2)*Z4",
    },
}

# free-module data: base-ring generators and module basis (as expressions)
MODULE_DATA = {
    "A2": (["S1", "T1", "S2", "T2"], ["1", "H", "H^2", "H^3", "U1", "U2"]),
    "G2": (["S1", "T1p", "S2", "T2p"], ["1", "H", "H^2", "H^3", "Z", "Z*H", "Z*H^2", "Z*H^3", "U11", "U21", "U12", "U22"]),
    "B2": (["S1", "T1", "S2", "T2"], ["1", "Z1", "Z1^2", "Z1^3", "Z1^4", "Z2", "Z3", "Z4"]),
}

RELATIONS = {"A2": A2_RELATIONS, "G2": G2_RELATIONS, "B2": B2_RELATIONS}


def named_generators(case: CaseSpec) -> NamedGenerators:
    if case.name == "A2":
        return a2_generators(case)
    if case.name == "G2":
        return g2_generators(case)
    if case.name == "B2":
        return b2_generators(case)
    if case.name == "Cyclic":
        return cyclic_generators(case.params["n"], case)
    raise ValueError(f"no named generators for case {case.label}")


def _weighted_bidegrees(expr: str, gens: NamedGenerators) -> set:
    ring = gens.free_ring()
    f = parse_poly(expr, ring)
    bd = gens.bidegrees()
    out = set()
    for k in f.terms:
        e = ring.exps(k)
        out.add(tuple(sum(x * bd[n][s] for x, n in zip(e, gens.names)) for s in (0, 1)))
    return out


@dataclass
class RelationResult:
    lhs: str
    printed: str
    residual: str
    homogeneous: bool
    corrected: Optional[str] = None
    corrected_residual: Optional[str] = None
    derived: Optional[str] = None

    @property
    def certified(self) -> bool:
        if self.residual == "0":
            return True
        return self.corrected is not None and self.corrected_residual == "0"

    def to_json(self) -> dict:
        out = {"relation": f"{self.lhs} = {self.printed}", "residual": self.residual, "homogeneous": self.homogeneous}
        if self.corrected is not None:
            out["corrected"] = f"{self.lhs} = {self.corrected}"
            out["corrected_residual"] = self.corrected_residual
        if self.derived is not None:
            out["derived"] = f"{self.lhs} = {self.derived}"
        return out


def verify_relations(case: CaseSpec) -> List[RelationResult]:
    gens = named_generators(case)
    ns = gens.namespace()
    fixes = CORRECTIONS.get(case.name, {})
    out = []
    for lhs, rhs in RELATIONS[case.name]:
        res = eval_expr(lhs, ns) - eval_expr(rhs, ns)
        homog = len(_weighted_bidegrees(lhs, gens) | _weighted_bidegrees(rhs, gens)) == 1
        r = RelationResult(lhs, rhs, render(res), homog)
        if lhs in fixes:
            r.corrected = fixes[lhs]
            r.corrected_residual = render(eval_expr(lhs, ns) - eval_expr(fixes[lhs], ns))
            r.derived = render(decompose(case, eval_expr(lhs, ns), gens))
        out.append(r)
    return out


# ---------------------------------------------------------------------------
# free-module bases


def _base_monomials(bidegs: List[Tuple[int, int]], target: Tuple[int, int]):
    """Exponent vectors e with sum e_k * bidegs[k] == target."""

    def rec(k, rem):
        if k == len(bidegs):
            if rem == (0, 0):
                yield ()
            return
        bi, bj = bidegs[k]
        e = 0
        while e * bi <= rem[0] and e * bj <= rem[1]:
            for rest in rec(k + 1, (rem[0] - e * bi, rem[1] - e * bj)):
                yield (e,) + rest
            e += 1
            if bi == 0 and bj == 0:
                break

    yield from rec(0, target)


class _ModuleSystem:
    def __init__(self, case: CaseSpec, gens: NamedGenerators, base: Sequence[str], basis: Sequence[str]):
        self.case = case
        self.gens = gens
        ns = gens.namespace()
        self.base = list(base)
        self.base_polys = [ns[n] for n in base]
        self.base_bideg = [p.bidegree() for p in self.base_polys]
        self.basis = list(basis)
        self.basis_polys = [parse_poly(b, case.vars, ns) for b in basis]
        self.basis_bideg = [p.bidegree() for p in self.basis_polys]
        self._pow: Dict[Tuple[int, int], Poly] = {}

    def _power(self, k: int, e: int) -> Poly:
        key = (k, e)
        p = self._pow.get(key)
        if p is None:
            p = self.case.vars.one() if e == 0 else self._power(k, e - 1) * self.base_polys[k]
            self._pow[key] = p
        return p

    def products(self, target: Tuple[int, int]):
        """(exponents, basis index, polynomial) for every r*m of the given bidegree."""
        for m, (mi, mj) in enumerate(self.basis_bideg):
            rem = (target[0] - mi, target[1] - mj)
            if rem[0] < 0 or rem[1] < 0:
                continue
            for e in _base_monomials(self.base_bideg, rem):
                p = self.basis_polys[m]
                for k, x in enumerate(e):
                    if x:
                        p = p * self._power(k, x)
                yield e, m, p

    def term_text(self, e, m) -> str:
        parts = []
        for name, x in zip(self.base, e):
            if x:
                parts.append(name if x == 1 else f"{name}^{x}")
        if self.basis[m] != "1":
            parts.append(self.basis[m] if "*" not in self.basis[m] else f"({self.basis[m]})")
        return "*".join(parts) or "1"


@dataclass
class CellCheck:
    bidegree: Tuple[int, int]
    dim: int
    products: int
    rank: int

    @property
    def ok(self) -> bool:
        return self.rank == self.dim == self.products


def verify_module_basis(case: CaseSpec, bound: int, base=None, basis=None, strict: bool = True) -> List[CellCheck]:
    """Rank check of R-products r*m against dim S^G(i, j) for every i + j <= bound."""
    dbase, dbasis = MODULE_DATA[case.name]
    sys = _ModuleSystem(case, named_generators(case), base or dbase, basis or dbasis)
    out = []
    for d in range(bound + 1):
        for i in range(d, -1, -1):
            cell = (i, d - i)
            dim = case.action.cell(*cell).dim
            ech = Echelon()
            count = 0
            for _, _, p in sys.products(cell):
                count += 1
                ech.add(p.terms)
            chk = CellCheck(cell, dim, count, ech.rank)
            out.append(chk)
            if strict and not chk.ok:
                what = "deficit" if chk.rank < dim else "dependence among products"
                raise ModuleBasisError(f"{what} at bidegree {cell}: dim {dim}, products {count}, rank {chk.rank}")
    return out


def decompose(case: CaseSpec, f: Poly, gens: Optional[NamedGenerators] = None) -> Poly:
    """Unique expression of a bihomogeneous invariant in the free-module basis.

    The result is a polynomial in the generator names (a free ring), e.g. the
    normal form of a product of generators.
    """
    gens = gens or named_generators(case)
    base, basis = MODULE_DATA[case.name]
    sys = _ModuleSystem(case, gens, base, basis)
    target = f.bidegree()
    if target is None:
        raise ValueError("decompose needs a nonzero bihomogeneous polynomial")
    prods = list(sys.products(target))
    keys = sorted({k for _, _, p in prods for k in p.terms} | set(f.terms))
    pos = {k: i for i, k in enumerate(keys)}
    ncols = len(prods) + 1
    rows = [[0] * ncols for _ in keys]
    for c, (_, _, p) in enumerate(prods):
        for k, v in p.terms.items():
            rows[pos[k]][c] = v
    for k, v in f.terms.items():
        rows[pos[k]][-1] = v
    red, pivots = rref(rows, ncols)
    if ncols - 1 in pivots:
        raise ModuleBasisError("polynomial is not in the span of the module products")
    ring = gens.free_ring()
    ns = ring.namespace()
    out = ring.zero()
    for r, pc in zip(red, pivots):
        c = r[-1]
        if c:
            e, m, _ = prods[pc]
            out = out + parse_poly(sys.term_text(e, m), ring, ns).scale(c)
    return out


# ---------------------------------------------------------------------------
# generation


@dataclass
class GenerationReport:
    per_degree: Dict[int, Tuple[int, int]]
    first_failure: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.first_failure is None


def verify_generation(case: CaseSpec, generators: NamedGenerators, bound: int, strict: bool = True) -> GenerationReport:
    """Products of the generators span S^G(i, j) for every i + j <= bound."""
    for n, p in zip(generators.names, generators.polys):
        if p.bidegree() is None:
            raise ValueError(f"generator {n} is not bihomogeneous")
        if not case.action.is_invariant(p):
            raise ValueError(f"generator {n} is not invariant")
    bidegs = [p.bidegree() for p in generators.polys]
    # products of bidegree (i, j) are built from products of smaller bidegree
    by_cell: Dict[Tuple[int, int], List[Poly]] = {(0, 0): [case.vars.one()]}
    per: Dict[int, Tuple[int, int]] = {}
    failure = None
    for d in range(bound + 1):
        have = want = 0
        for i in range(d, -1, -1):
            cell = (i, d - i)
            dim = case.action.cell(*cell).dim
            if cell != (0, 0):
                ech = Echelon()
                basis: List[Poly] = []
                for g, (gi, gj) in zip(generators.polys, bidegs):
                    src = by_cell.get((i - gi, d - i - gj))
                    if not src:
                        continue
                    for s in src:
                        if len(basis) == dim:
                            break
                        q = s * g
                        if ech.add(q.terms):
                            basis.append(q)
                by_cell[cell] = basis
            got = len(by_cell[cell])
            have += got
            want += dim
        per[d] = (have, want)
        if have != want and failure is None:
            failure = d
    rep = GenerationReport(per, failure)
    if strict and failure is not None:
        have, want = per[failure]
        raise GenerationError(f"span deficit at degree {failure}: {have} of {want}")
    return rep


# ---------------------------------------------------------------------------
# bracket table on the A2 generators

A2_TABLE_ORDER = ["S1", "S2", "T1", "T2", "H", "U1", "U2"]
A2_TABLE = {
    "S1": ["0", "-H", "0", "U1", "-2*S1", "2*U2", "3*T1"],
    "S2": ["H", "0", "-U2", "0", "2*S2", "-3*T2", "-2*U1"],
    "T1": ["0", "U2", "0", "-6*S1*S2 + 3*H^2", "-3*T1", "-6*S1*H", "6*S1^2"],
    "T2": ["-U1", "0", "6*S1*S2 - 3*H^2", "0", "3*T2", "-6*S2^2", "6*S2*H"],
    "H": ["2*S1", "-2*S2", "3*T1", "-3*T2", "0", "-U1", "U2"],
    "U1": ["-2*U2", "3*T2", "6*S1*H", "6*S2^2", "U1", "0", "-30*S1*S2 + 3*H^2"],
    "U2": ["-3*T1", "2*U1", "-6*S1^2", "-6*S2*H", "-U2", "30*S1*S2 - 3*H^2", "0"],
}


@dataclass
class TableEntry:
    row: str
    col: str
    printed: str
    computed: str
    residual: str


def verify_bracket_table(case: Optional[CaseSpec] = None, table=None) -> List[TableEntry]:
    """Compare {row, col} of the defining polynomials with each tabulated entry."""
    case = case or a2()
    table = table or A2_TABLE
    gens = a2_generators(case)
    ns = gens.namespace()
    out = []
    for r in A2_TABLE_ORDER:
        for c, printed in zip(A2_TABLE_ORDER, table[r]):
            val = bracket(case.structure, ns[r], ns[c])
            res = val - eval_expr(printed, ns) if printed != "0" else val
            expressed = render(decompose(case, val, gens)) if val else "0"
            out.append(TableEntry(r, c, printed, expressed, render(res)))
    return out


# ---------------------------------------------------------------------------
# abstract Jacobi identity on the free algebra in the seven generators


FREE_ORDER = ["S1", "T1", "U1", "S2", "T2", "U2", "H"]


def _free_pairing(table) -> Tuple[VarSet, Dict[Tuple[int, int], Poly]]:
    ring = VarSet.free(FREE_ORDER)
    idx = {n: i for i, n in enumerate(FREE_ORDER)}
    pairing = {}
    for r in A2_TABLE_ORDER:
        for c, expr in zip(A2_TABLE_ORDER, table[r]):
            val = parse_poly(expr, ring)
            if val:
                pairing[(idx[r], idx[c])] = val
    return ring, pairing


def free_bracket(ring: VarSet, pairing, f: Poly, g: Poly) -> Poly:
    """Biderivation extending the generator table: sum P_ab df/dX_a dg/dX_b."""
    out = ring.zero()
    n = ring.nvars
    df = [f.partial(a) for a in range(n)]
    dg = [g.partial(b) for b in range(n)]
    for (a, b), p in pairing.items():
        if df[a] and dg[b]:
            out = out + df[a] * dg[b] * p
    return out


def jacobi_check_abstract(table=None) -> Dict[Tuple[str, str, str], str]:
    """Jacobiator on each of the 35 unordered triples of distinct generators."""
    table = table or A2_TABLE
    ring, pairing = _free_pairing(table)
    gens = ring.gens()
    out = {}
    for a, b, c in combinations(range(ring.nvars), 3):
        x, y, z = gens[a], gens[b], gens[c]
        br = lambda u, v: free_bracket(ring, pairing, u, v)
        j = br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))
        out[(FREE_ORDER[a], FREE_ORDER[b], FREE_ORDER[c])] = render(j)
    return out


def table_antisymmetry(table=None) -> List[Tuple[str, str]]:
    """Pairs whose two printed entries are not negatives of each other."""
    table = table or A2_TABLE
    ring = VarSet.free(FREE_ORDER)
    bad = []
    for i, r in enumerate(A2_TABLE_ORDER):
        for j, c in enumerate(A2_TABLE_ORDER):
            if j < i:
                continue
            u = parse_poly(table[r][j], ring)
            v = parse_poly(table[c][i], ring)
            if u + v:
                bad.append((r, c))
    return bad


def perturbed_table(row: str, col: str, expr: str = "0"):
    """Copy of the table with {row, col} (and its mirror) replaced."""
    t = {k: list(v) for k, v in A2_TABLE.items()}
    i, j = A2_TABLE_ORDER.index(row), A2_TABLE_ORDER.index(col)
    t[row][j] = expr
    t[col][i] = "0" if expr == "0" else f"-({expr})"
    return t


def generator_invariance(case: CaseSpec, gens: Optional[NamedGenerators] = None) -> Dict[str, bool]:
    gens = gens or named_generators(case)
    return {n: case.action.is_invariant(p) for n, p in zip(gens.names, gens.polys)}


def alt_definition_residuals(case: Optional[CaseSpec] = None) -> Dict[str, str]:
    """Differences between the two printed forms of each A2 generator."""
    case = case or a2()
    main = a2_generators(case, A2_DEFS)
    alt = a2_generators(case, A2_ALT_DEFS)
    return {n: render(main[n] - alt[n]) for n in main.names}

