"""Degree-zero Poisson homology HP0(S^G) = S^G / {S^G, S^G}.

The bracket is homogeneous of degree -2 and compatible with the finer
gradings available: for actions preserving the x/y split it maps bidegrees
(i1, j1), (i2, j2) to (i1 + i2 - 1, j1 + j2 - 1); for diagonal actions it
also adds torus weights.  The span is therefore computed one graded cell at a
time, in coordinates of the cell's invariant basis, and the elimination for a
cell stops as soon as its rank reaches the cell dimension.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .characters import prop6_obstruction
from .exactalg import Echelon
from .groups import DiagonalAction, InvariantCell
from .poisson import bracket
from .polyring import Poly, monomial_basis, vectorize
from .sl2tools import prop5_certify, prop5_constants

TRAILING_WINDOW = 4


class NotInvariantError(ValueError):
    pass


class NotHomogeneousError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graded cells of S^G and the bracket pairs landing in each


class _CellSystem:
    """Enumerates target cells of S^G(d) and the source pairs bracketing into them."""

    def __init__(self, case):
        self.case = case
        self.action = case.action
        self.ps = case.structure
        vars = case.vars
        self.diagonal = isinstance(self.action, DiagonalAction)
        structure_bigraded = all(vars.side[i] != vars.side[j] for (i, j) in self.ps.pairing.entries)
        self.bigraded = not self.diagonal and self.action.preserves_sides and structure_bigraded
        self._buckets: Dict[int, Dict[Tuple[int, ...], InvariantCell]] = {}
        self._spans: Dict[object, Echelon] = {}
        self._complete: Dict[object, bool] = {}

    # diagonal weight buckets -------------------------------------------------
    def buckets(self, d: int) -> Dict[Tuple[int, ...], InvariantCell]:
        b = self._buckets.get(d)
        if b is None:
            groups: Dict[Tuple[int, ...], List[int]] = {}
            vars = self.case.vars
            for e in monomial_basis(vars, d, self.action.monomial_invariant):
                groups.setdefault(self.action.weight(e), []).append(vars.key(e))
            b = {
                w: InvariantCell([Poly(vars, {k: 1}) for k in keys], keys)
                for w, keys in sorted(groups.items())
            }
            self._buckets[d] = b
        return b

    def cell(self, key) -> InvariantCell:
        if self.diagonal:
            d, w = key
            return self.buckets(d).get(w) or InvariantCell([], [])
        if self.bigraded:
            return self.action.cell(*key)
        return self.action.degree_cell(key)

    def target_cells(self, d: int, weight_zero_only: bool = False) -> List[Tuple[object, InvariantCell]]:
        if self.diagonal:
            zero = tuple([0] * self.action.pairs)
            if weight_zero_only:
                c = self.buckets(d).get(zero)
                return [((d, zero), c)] if c else []
            return [((d, w), c) for w, c in self.buckets(d).items()]
        if self.bigraded:
            return [((i, d - i), self.action.cell(i, d - i)) for i in range(d, -1, -1)]
        return [(d, self.action.degree_cell(d))]

    def cell_key_of(self, f: Poly) -> Dict[object, Poly]:
        ring = f.ring
        if self.diagonal:
            return f.homogeneous_components(lambda k: (ring.degree(k), self.action.weight(ring.exps(k))))
        if self.bigraded:
            return f.homogeneous_components(ring.bidegree)
        return f.homogeneous_components(ring.degree)

    def pairs(self, key) -> Iterator[Tuple[Poly, Poly]]:
        """Source pairs (u, v), u of degree a <= b, in canonical (a, index, index) order."""
        if self.diagonal:
            d, w = key
            for a in range(1, (d + 2) // 2 + 1):
                b = d + 2 - a
                left = self.buckets(a)
                if not left:
                    continue
                right = self.buckets(b)
                for w1, cu in left.items():
                    w2 = tuple(x - y for x, y in zip(w, w1))
                    cv = right.get(w2)
                    if cv is None:
                        continue
                    if a == b and w2 < w1:
                        continue
                    for iu, u in enumerate(cu.polys):
                        for iv, v in enumerate(cv.polys):
                            if a == b and w1 == w2 and iv <= iu:
                                continue
                            yield u, v
            return
        if self.bigraded:
            i, j = key
            d = i + j
            for a in range(1, (d + 2) // 2 + 1):
                b = d + 2 - a
                for i1 in range(min(a, i + 1), -1, -1):
                    j1 = a - i1
                    i2, j2 = i + 1 - i1, j + 1 - j1
                    if j2 < 0 or i2 < 0:
                        continue
                    if a == b and i2 > i1:
                        continue
                    cu = self.action.cell(i1, j1)
                    if not cu.dim:
                        continue
                    cv = self.action.cell(i2, j2)
                    same = a == b and i1 == i2
                    for iu, u in enumerate(cu.polys):
                        for iv, v in enumerate(cv.polys):
                            if same and iv <= iu:
                                continue
                            yield u, v
            return
        d = key
        for a in range(1, (d + 2) // 2 + 1):
            b = d + 2 - a
            cu = self.action.degree_cell(a)
            cv = self.action.degree_cell(b)
            for iu, u in enumerate(cu.polys):
                for iv, v in enumerate(cv.polys):
                    if a == b and iv <= iu:
                        continue
                    yield u, v

    # span of one cell ---------------------------------------------------------
    def span(self, key, cell: Optional[InvariantCell] = None) -> Echelon:
        """Echelon basis of the bracket span inside one cell, in invariant coordinates.

        Stops early once the span is the whole cell, which is all that both the
        cokernel count and membership tests need.
        """
        ech = self._spans.get(key)
        if ech is not None:
            return ech
        if cell is None:
            cell = self.cell(key)
        ech = Echelon(cell.dim)
        if cell.dim:
            ps = self.ps
            for u, v in self.pairs(key):
                r = bracket(ps, u, v)
                if not r:
                    continue
                if ech.add(cell.coordinates(r)) and ech.rank == cell.dim:
                    break
        self._spans[key] = ech
        return ech

    def cokernel(self, d: int, weight_zero_only: bool = False) -> int:
        total = 0
        for key, cell in self.target_cells(d, weight_zero_only):
            if cell.dim:
                total += cell.dim - self.span(key, cell).rank
        return total


def _system(case) -> _CellSystem:
    sys = case.__dict__.get("_cell_system")
    if sys is None:
        sys = _CellSystem(case)
        case.__dict__["_cell_system"] = sys
    return sys


# ---------------------------------------------------------------------------
# reports


@dataclass
class Hp0Report:
    case: str
    mode: str
    scan_bound: int
    per_degree: Dict[int, int]
    trailing_zero_window: int = TRAILING_WINDOW
    agreement: Optional[bool] = None
    methods: Dict[int, str] = field(default_factory=dict)
    certificates: List[dict] = field(default_factory=list)
    seconds: float = 0.0
    notes: List[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.per_degree.values())

    @property
    def trailing_zeros(self) -> bool:
        top = max(self.per_degree) if self.per_degree else -1
        window = range(max(0, top - self.trailing_zero_window + 1), top + 1)
        return all(self.per_degree.get(d, 0) == 0 for d in window)

    def contributing_degrees(self) -> List[int]:
        return [d for d, v in sorted(self.per_degree.items()) if v]

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "mode": self.mode,
            "scan_bound": self.scan_bound,
            "per_degree": {str(d): v for d, v in sorted(self.per_degree.items())},
            "total": self.total,
            "trailing_zeros": self.trailing_zeros,
            "agreement": self.agreement,
        }
        if self.methods:
            out["methods"] = {str(d): m for d, m in sorted(self.methods.items())}
        if self.certificates:
            out["certificates"] = self.certificates
        if self.notes:
            out["notes"] = self.notes
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# public operations


def bracket_span_basis(case, d: int, coords: str = "monomial") -> List[List]:
    """All brackets {u, v} landing in S^G(d), vectorized.

    ``coords="monomial"`` gives rows against the degree-d monomial basis;
    ``coords="invariant"`` gives sparse coordinate rows per graded cell.
    """
    sys = _system(case)
    basis = monomial_basis(case.vars, d)
    rows = []
    for key, cell in sys.target_cells(d):
        for u, v in sys.pairs(key):
            r = bracket(case.structure, u, v)
            if coords == "monomial":
                rows.append(vectorize(r, basis))
            else:
                rows.append(cell.coordinates(r))
    return rows


def _brute_degree(case, d: int) -> int:
    return _system(case).cokernel(d)


_WORKER_CASE = None


def _worker_init(recipe):
    global _WORKER_CASE
    from .cases import build_case

    name, n, gens, custom_file, bound = recipe
    _WORKER_CASE = build_case(name, n=n, gens=gens, custom_file=custom_file).with_bound(bound)


def _worker_degree(d: int) -> Tuple[int, int]:
    return d, _brute_degree(_WORKER_CASE, d)


def hp0_scan(case, bound: Optional[int] = None, jobs: int = 1, recipe=None) -> Hp0Report:
    """Brute force: cokernel of the full bracket span in every degree up to the bound."""
    bound = case.scan_bound if bound is None else bound
    t0 = time.perf_counter()
    per: Dict[int, int] = {}
    if jobs > 1 and recipe is not None:
        with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(recipe,)) as pool:
            # largest degrees first so the slow tail starts early; merged by degree
            for d, v in pool.map(_worker_degree, range(bound, -1, -1)):
                per[d] = v
    else:
        for d in range(bound + 1):
            per[d] = _brute_degree(case, d)
    per = dict(sorted(per.items()))
    methods = {d: "bruteforce" for d in per}
    return Hp0Report(case.label, "bruteforce", bound, per, methods=methods, seconds=time.perf_counter() - t0)


def _sl2_paper_degree(case, d: int, cache: dict) -> Tuple[int, str, Optional[dict]]:
    ctx = case.sl2
    N = ctx.N
    if d % 2 or (d // 2) % N:
        return 0, "isotypic", None
    l = d // 2
    for idx, w in enumerate(case.witnesses):
        consts = cache.get(idx)
        if consts is None:
            consts = cache[idx] = prop5_constants(ctx, w.P, w.Q, w.beta)
        k = l - consts[2]
        if k < 0:
            continue
        cert = prop5_certify(ctx, w.P, w.Q, w.beta, k, consts)
        if cert is not None:
            return 0, "certified", cert.to_json()
    if prop6_obstruction(case, l):
        return 1, "obstructed", None
    return _brute_degree(case, d), "escalated", None


def hp0_paper_mode(case, bound: Optional[int] = None) -> Hp0Report:
    """Fast route: only the sl(2)- or torus-invariant part is examined."""
    if bound is None:
        bound = case.paper_bound if case.paper_bound is not None else case.scan_bound
    t0 = time.perf_counter()
    per: Dict[int, int] = {}
    methods: Dict[int, str] = {}
    certs: List[dict] = []
    if isinstance(case.action, DiagonalAction):
        sys = _system(case)
        for d in range(bound + 1):
            per[d] = sys.cokernel(d, weight_zero_only=True)
            methods[d] = "weight-zero"
    else:
        if case.sl2 is None:
            raise ValueError(f"paper mode needs sl(2) data; case {case.label} has none")
        cache: dict = {}
        for d in range(bound + 1):
            v, how, cert = _sl2_paper_degree(case, d, cache)
            per[d] = v
            methods[d] = how
            if cert is not None:
                certs.append(cert)
    return Hp0Report(case.label, "paper", bound, per, methods=methods, certificates=certs, seconds=time.perf_counter() - t0)


def hp0(case, mode: Optional[str] = None, bound: Optional[int] = None, jobs: int = 1, recipe=None) -> Hp0Report:
    mode = mode or case.mode
    if mode == "bruteforce":
        return hp0_scan(case, bound, jobs, recipe)
    if mode == "paper":
        return hp0_paper_mode(case, bound)
    if mode != "both":
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    paper = hp0_paper_mode(case, bound)
    notes = []
    if case.brute_force_ok:
        brute_bound = case.scan_bound if bound is None else bound
        brute = hp0_scan(case, brute_bound, jobs, recipe)
        shared = [d for d in brute.per_degree if d in paper.per_degree]
        agreement = all(brute.per_degree[d] == paper.per_degree[d] for d in shared)
        per = dict(paper.per_degree)
        per.update(brute.per_degree)
        if paper.scan_bound > brute.scan_bound:
            notes.append(f"degrees {brute.scan_bound + 1}..{paper.scan_bound} from paper mode only")
    else:
        brute_bound = 0
        agreement = None
        per = dict(paper.per_degree)
        notes.append("brute force not run for this case; paper mode only")
    return Hp0Report(
        case.label, "both", max(brute_bound, paper.scan_bound), per,
        agreement=agreement, methods=paper.methods, certificates=paper.certificates,
        seconds=time.perf_counter() - t0, notes=notes,
    )


def in_bracket_span(case, f: Poly) -> bool:
    """Exact membership of an invariant homogeneous f in {S^G, S^G}."""
    if f.ring != case.vars:
        raise ValueError("polynomial is not over the case's variables")
    if not f:
        return True
    if not f.is_homogeneous():
        raise NotHomogeneousError("polynomial is not homogeneous")
    if not case.action.is_invariant(f):
        raise NotInvariantError("polynomial is not invariant")
    d = f.degree()
    if d > max(case.scan_bound, case.paper_bound or 0):
        raise ValueError(f"degree {d} exceeds the scan bound")
    sys = _system(case)
    for key, part in sys.cell_key_of(f).items():
        cell = sys.cell(key)
        ech = sys.span(key, cell)
        if ech.rank == cell.dim:
            continue
        if not ech.contains(cell.coordinates(part)):
            return False
    return True


def ideal_probe(case, p: Poly, q: Poly) -> dict:
    """Membership of p and of pq; (True, False) witnesses that the span is no ideal."""
    p_in = in_bracket_span(case, p)
    pq_in = in_bracket_span(case, p * q)
    return {"p_in_span": p_in, "pq_in_span": pq_in, "witness": p_in and not pq_in}
