"""Finite group actions on polynomial rings, invariant bases and class data.

Two flavors are supported.  :class:`MatrixAction` is a group generated by
rational matrices acting by linear substitution.  :class:`DiagonalAction` is
a subgroup of (Z/m)^n acting on pair i by x_i -> z^k x_i, y_i -> z^-k y_i for
z a primitive m-th root of unity; it is handled purely through integer weights,
so invariance is a congruence and no root of unity is ever formed.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import RatMatrix, rank, sparse_rref
from .poisson import PoissonStructure
from .polyring import (
    X_SIDE,
    Monomial,
    Poly,
    Substitution,
    VarSet,
    bimonomial_basis,
    monomial_basis,
)


class GroupSizeError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConjClass:
    representative: object
    size: int
    fixed_dim: int


@dataclass
class InvariantCell:
    """Basis of one homogeneous piece of S^G in reduced echelon form.

    ``pivots[k]`` is the monomial key where ``polys[k]`` has coefficient 1 and
    every other basis element has coefficient 0, so the coordinates of an
    invariant in this basis are read off at the pivots.
    """

    polys: List[Poly]
    pivots: List[int]

    @property
    def dim(self) -> int:
        return len(self.polys)

    def coordinates(self, f: Poly) -> Dict[int, object]:
        terms = f.terms
        return {i: terms[p] for i, p in enumerate(self.pivots) if p in terms}


class _CellCache:
    def __init__(self):
        self._lock = threading.Lock()
        self._data: Dict[object, InvariantCell] = {}

    def get(self, key, build):
        cell = self._data.get(key)
        if cell is None:
            cell = build()
            with self._lock:
                cell = self._data.setdefault(key, cell)
        return cell


def _echelon_cell(ring: VarSet, keys: List[int], polys: Iterable[Poly]) -> InvariantCell:
    pos = {k: i for i, k in enumerate(keys)}
    rows = []
    for p in polys:
        if p:
            rows.append({pos[k]: c for k, c in p.terms.items()})
    basis = sparse_rref(rows)
    out, piv = [], []
    for row in basis:
        out.append(Poly(ring, {keys[c]: v for c, v in row.items()}))
        piv.append(keys[min(row)])
    return InvariantCell(out, piv)


class MatrixAction:
    """Finite group generated by invertible rational matrices (row-image convention)."""

    flavor = "matrix"

    def __init__(self, vars: VarSet, generators: Sequence[RatMatrix], structure: Optional[PoissonStructure] = None, cap: int = 100_000):
        n = vars.nvars
        for g in generators:
            if g.rows != n or g.cols != n:
                raise ValueError(f"generator must be {n}x{n}")
            if rank(g) != n:
                raise ValueError("generator is not invertible")
            if structure is not None and g @ structure.pairing @ g.transpose() != structure.pairing:
                raise ValueError("generator does not preserve the Poisson structure")
        self.vars = vars
        self.generators = list(generators)
        self.structure = structure
        self.cap = cap
        self._elements: Optional[List[RatMatrix]] = None
        self._subs: Optional[List[Substitution]] = None
        self._gen_subs = [Substitution(vars, g) for g in self.generators]
        self._cells = _CellCache()
        self.preserves_sides = all(
            all(vars.side[i] == vars.side[j] for (i, j) in g.entries) for g in self.generators
        )

    def close(self) -> List[RatMatrix]:
        return close(self)

    @property
    def order(self) -> int:
        return len(self.close())

    def substitutions(self) -> List[Substitution]:
        if self._subs is None:
            self._subs = [Substitution(self.vars, g) for g in self.close()]
        return self._subs

    def act(self, g: RatMatrix, f: Poly) -> Poly:
        return Substitution(self.vars, g)(f)

    def is_invariant(self, f: Poly) -> bool:
        return all(s(f) == f for s in self._gen_subs)

    def generator_images(self, f: Poly) -> List[Poly]:
        return [s(f) for s in self._gen_subs]

    def reynolds(self, f: Poly) -> Poly:
        subs = self.substitutions()
        acc: Dict[int, object] = {}
        for s in subs:
            for k, c in s(f).terms.items():
                acc[k] = acc.get(k, 0) + c
        inv = Fraction(1, len(subs))
        return Poly(self.vars, {k: c * inv for k, c in acc.items()})

    def _orbit_sum(self, key: int) -> Poly:
        acc: Dict[int, object] = {}
        for s in self.substitutions():
            for k, c in s.monomial(key).terms.items():
                acc[k] = acc.get(k, 0) + c
        return Poly(self.vars, acc)

    def cell(self, i: int, j: int) -> InvariantCell:
        def build():
            keys = [self.vars.key(e) for e in bimonomial_basis(self.vars, i, j)]
            return _echelon_cell(self.vars, keys, (self._orbit_sum(k) for k in keys))

        if not self.preserves_sides:
            raise ValueError("action mixes x-side and y-side variables; no bigrading")
        return self._cells.get((i, j), build)

    def degree_cell(self, d: int) -> InvariantCell:
        def build():
            keys = [self.vars.key(e) for e in monomial_basis(self.vars, d)]
            if self.preserves_sides:
                polys = [p for i in range(d + 1) for p in self.cell(i, d - i).polys]
            else:
                polys = (self._orbit_sum(k) for k in keys)
            return _echelon_cell(self.vars, keys, polys)

        return self._cells.get(("deg", d), build)


class DiagonalAction:
    """Subgroup of (Z/m)^n generated by integer weight tuples."""

    flavor = "diagonal"

    def __init__(self, modulus: int, pairs: int, subgroup_generators: Sequence[Sequence[int]], vars: Optional[VarSet] = None):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus
        self.pairs = pairs
        gens = []
        for w in subgroup_generators:
            if len(w) != pairs:
                raise ValueError(f"weight tuple {w} does not have {pairs} entries")
            gens.append(tuple(int(x) % modulus for x in w))
        self.generators = gens
        if vars is None:
            names = []
            for i in range(1, pairs + 1):
                names += [f"x{i}", f"y{i}"]
            vars = VarSet(names)
        if len(vars.pairs) != pairs:
            raise ValueError("variable set does not have the right number of pairs")
        self.vars = vars
        self.structure = None
        self._elements: Optional[List[Tuple[int, ...]]] = None
        self._cells = _CellCache()

    def close(self) -> List[Tuple[int, ...]]:
        return close(self)

    @property
    def order(self) -> int:
        return len(self.close())

    def pair_exponents(self, exps: Monomial) -> Tuple[Tuple[int, int], ...]:
        return tuple((exps[x], exps[y]) for x, y in self.vars.pairs)

    def weight(self, exps: Monomial) -> Tuple[int, ...]:
        """Torus weight: beta_i - alpha_i per pair (the eigenvalue of ad(x_i y_i))."""
        return tuple(b - a for a, b in self.pair_exponents(exps))

    def monomial_invariant(self, exps: Monomial) -> bool:
        diff = [a - b for a, b in self.pair_exponents(exps)]
        m = self.modulus
        return all(sum(w * d for w, d in zip(gen, diff)) % m == 0 for gen in self.generators)

    def is_invariant(self, f: Poly) -> bool:
        return all(self.monomial_invariant(f.ring.exps(k)) for k in f.terms)

    def cell(self, i: int, j: int) -> InvariantCell:
        def build():
            monos = bimonomial_basis(self.vars, i, j, self.monomial_invariant)
            keys = [self.vars.key(e) for e in monos]
            return InvariantCell([Poly(self.vars, {k: 1}) for k in keys], keys)

        return self._cells.get((i, j), build)

    def degree_cell(self, d: int) -> InvariantCell:
        def build():
            monos = monomial_basis(self.vars, d, self.monomial_invariant)
            keys = [self.vars.key(e) for e in monos]
            return InvariantCell([Poly(self.vars, {k: 1}) for k in keys], keys)

        return self._cells.get(("deg", d), build)

    preserves_sides = True


def close(action) -> list:
    """All group elements, breadth-first from the identity, deterministic order."""
    if action._elements is not None:
        return action._elements
    if isinstance(action, DiagonalAction):
        m, n = action.modulus, action.pairs
        ident = tuple([0] * n)
        seen = {ident}
        order = [ident]
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for w in action.generators:
                h = tuple((a + b) % m for a, b in zip(g, w))
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    queue.append(h)
        action._elements = order
        return order
    n = action.vars.nvars
    ident = RatMatrix.identity(n)
    seen = {ident.key(): ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in action.generators:
            h = g @ s
            k = h.key()
            if k not in seen:
                seen[k] = h
                order.append(h)
                queue.append(h)
                if len(order) > action.cap:
                    raise GroupSizeError(f"group closure exceeds cap {action.cap}")
    action._elements = order
    return order


def invariant_basis(action, d: int) -> List[Poly]:
    """Basis of the degree-d invariants."""
    return list(action.degree_cell(d).polys)


def invariant_basis_bi(action, bideg: Tuple[int, int]) -> List[Poly]:
    """Basis of the invariants of bidegree (i, j)."""
    return list(action.cell(*bideg).polys)


def _fixed_dim_matrix(g: RatMatrix) -> int:
    return g.rows - rank(g - RatMatrix.identity(g.rows))


def conjugacy_classes(action) -> List[ConjClass]:
    elems = action.close()
    if isinstance(action, DiagonalAction):
        m = action.modulus
        return [ConjClass(g, 1, 2 * sum(1 for w in g if w % m == 0)) for g in elems]
    index = {g.key(): i for i, g in enumerate(elems)}
    ident_key = RatMatrix.identity(action.vars.nvars).key()
    inverse = {}
    for i, g in enumerate(elems):
        if i in inverse:
            continue
        p = g
        prev = None
        while p.key() != ident_key:
            prev = p
            p = p @ g
        inv = prev if prev is not None else g
        j = index[inv.key()]
        inverse[i] = j
        inverse[j] = i
    assigned = [False] * len(elems)
    classes = []
    for i, g in enumerate(elems):
        if assigned[i]:
            continue
        members = set()
        for h_idx, h in enumerate(elems):
            c = elems[inverse[h_idx]] @ g @ h
            members.add(index[c.key()])
        for mi in members:
            assigned[mi] = True
        classes.append(ConjClass(g, len(members), _fixed_dim_matrix(g)))
    return classes


def hh0_dim(action) -> int:
    """Number of conjugacy classes acting without nonzero fixed vectors."""
    return sum(1 for c in conjugacy_classes(action) if c.fixed_dim == 0)


def sides(vars: VarSet) -> Tuple[List[int], List[int]]:
    xs = [i for i, s in enumerate(vars.side) if s == X_SIDE]
    ys = [i for i in range(vars.nvars) if i not in xs]
    return xs, ys
