"""Exact rational scalars and linear algebra.

Rationals are :class:`fractions.Fraction` (plain ``int`` is accepted anywhere a
rational is).  Sparse rows are ``dict`` objects mapping column index to a
nonzero rational.  Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Rat = Fraction
SparseRow = Dict[int, Rational]


class DimensionError(ValueError):
    """Raised when row or matrix shapes do not agree."""


def parse_rat(text) -> Fraction:
    """Parse ``"num/den"`` (or an int / Fraction) into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rat(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class RatMatrix:
    """Sparse rational matrix; absent entries are zero."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], Rational]] = None):
        self.rows = rows
        self.cols = cols
        self.entries: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionError(f"entry ({i}, {j}) outside {rows}x{cols}")
            if v:
                self.entries[(i, j)] = Fraction(v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Rational]]) -> "RatMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise DimensionError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        return self.entries.get(ij, Fraction(0))

    def to_rows(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def sparse_rows(self) -> List[SparseRow]:
        out: List[SparseRow] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        right = other.sparse_rows()
        acc: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), v in self.entries.items():
            for j, w in right[k].items():
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return RatMatrix(self.rows, other.cols, acc)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) - v
        return RatMatrix(self.rows, self.cols, acc)

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def key(self) -> Tuple:
        """Canonical hashable form, used for group closure."""
        return (self.rows, self.cols, tuple(sorted(self.entries.items())))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rat(v) for v in row) for row in self.to_rows())
        return f"RatMatrix[{body}]"


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _integral(row: Mapping[int, Rational]) -> Dict[int, int]:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            d = v.denominator
            den = den * d // gcd(den, d)
    out = {}
    for c, v in row.items():
        if v:
            iv = v * den
            out[c] = int(iv) if not isinstance(iv, Fraction) else iv.numerator
    return out


class Echelon:
    """Incrementally maintained echelon basis of a row space.

    Rows are kept integral and primitive, so elimination is fraction-free.
    Each stored row has a distinct leading (smallest) column; a new row is
    reduced by eliminating its smallest column against the stored pivot,
    repeatedly, which realizes the smallest-column pivot rule.
    """

    def __init__(self, ncols: Optional[int] = None):
        self.ncols = ncols
        self.pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: Mapping[int, Rational]) -> Dict[int, int]:
        r = _integral(row)
        if self.ncols is not None and r and (min(r) < 0 or max(r) >= self.ncols):
            raise DimensionError("row index outside column range")
        pivots = self.pivots
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                return r
            a = p[c]
            b = r[c]
            # r <- a*r - b*p, keeps integers
            if a != 1:
                r = {k: a * v for k, v in r.items()}
            for k, v in p.items():
                nv = r.get(k, 0) - b * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            if r:
                r = _primitive(r)
        return r

    def add(self, row: Mapping[int, Rational]) -> bool:
        """Insert ``row``; return True iff it increased the rank."""
        r = self._reduce(row)
        if not r:
            return False
        r = _primitive(r)
        self.pivots[min(r)] = r
        return True

    def contains(self, row: Mapping[int, Rational]) -> bool:
        return not self._reduce(row)


def _as_sparse(row) -> SparseRow:
    if isinstance(row, Mapping):
        return {k: v for k, v in row.items() if v}
    return {i: v for i, v in enumerate(row) if v}


def rank(m) -> int:
    """Exact rank of a :class:`RatMatrix` or of a list of (dense or sparse) rows."""
    rows = m.sparse_rows() if isinstance(m, RatMatrix) else [_as_sparse(r) for r in m]
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def in_span(v, basis: Sequence) -> bool:
    """True iff ``v`` lies in the rational span of ``basis``."""
    if not isinstance(v, Mapping):
        n = len(v)
        for b in basis:
            if not isinstance(b, Mapping) and len(b) != n:
                raise DimensionError(f"row length {len(b)} != {n}")
    ech = Echelon()
    for b in basis:
        ech.add(_as_sparse(b))
    return ech.contains(_as_sparse(v))


def rref(rows: Sequence[Sequence[Rational]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form (dense, Fractions); returns (nonzero rows, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    for r in mat:
        if len(r) != ncols:
            raise DimensionError("ragged rows")
    pivots: List[int] = []
    top = 0
    for c in range(ncols):
        piv = None
        for i in range(top, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[top], mat[piv] = mat[piv], mat[top]
        lead = mat[top][c]
        if lead != 1:
            mat[top] = [x / lead for x in mat[top]]
        prow = mat[top]
        for i in range(len(mat)):
            if i != top and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], prow)]
        pivots.append(c)
        top += 1
        if top == len(mat):
            break
    return mat[:top], pivots


def sparse_rref(rows: Iterable[Mapping[int, Rational]]) -> List[Dict[int, Fraction]]:
    """Reduced echelon basis of the span of sparse rows, sorted by pivot column.

    Each returned row has leading coefficient 1 at its pivot and zeros at all
    other pivot columns.
    """
    ech = Echelon()
    for r in rows:
        ech.add(r)
    cols = sorted(ech.pivots)
    out: Dict[int, Dict[int, Fraction]] = {}
    for c in reversed(cols):
        row = {k: Fraction(v, ech.pivots[c][c]) for k, v in ech.pivots[c].items()}
        for c2 in list(row):
            if c2 != c and c2 in out:
                f = row[c2]
                for k, v in out[c2].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        out[c] = row
    return [out[c] for c in cols]


def nullspace(rows: Sequence[Sequence[Rational]], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : M x = 0} for the matrix with the given dense rows."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in zip(red, pivots):
            x[pc] = -r[f]
        basis.append(x)
    return basis


def determinant(m: RatMatrix) -> Fraction:
    if m.rows != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    mat = m.to_rows()
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det *= mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c]:
                f = mat[i][c] / mat[c][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    return det
