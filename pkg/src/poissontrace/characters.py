"""sl(2) characters of graded invariant rings and truncated rational series.

Bigraded dimensions dim S^G(i, j) are counted from invariant bases.  The
character of the degree-n piece is chi_n(q) = sum dims(i, j) q^(i-j) over
i + j = n; the trivial multiplicity of a character is [q^0] - [q^2].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterator, Optional, Tuple

from .polyring import Poly, VarSet, parse_poly


class CharacterError(ArithmeticError):
    """A Laurent polynomial that should be an sl(2) character is not one."""


class TruncationError(ValueError):
    pass


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentQ:
    """Finite Laurent polynomial in q with rational (usually integer) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[int, Rational]] = None):
        self.coeffs: Dict[int, Rational] = {int(k): _norm(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def one(cls) -> "LaurentQ":
        return cls({0: 1})

    def __getitem__(self, k: int) -> Rational:
        return self.coeffs.get(k, 0)

    def __add__(self, other: "LaurentQ") -> "LaurentQ":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentQ(out)

    def __sub__(self, other: "LaurentQ") -> "LaurentQ":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return LaurentQ(out)

    def __mul__(self, other) -> "LaurentQ":
        if isinstance(other, (int, Fraction)):
            return LaurentQ({k: v * other for k, v in self.coeffs.items()})
        out: Dict[int, Rational] = {}
        for a, u in self.coeffs.items():
            for b, v in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + u * v
        return LaurentQ(out)

    __rmul__ = __mul__

    def shift(self, e: int) -> "LaurentQ":
        return LaurentQ({k + e: v for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentQ({0: other})
        return isinstance(other, LaurentQ) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def at_one(self) -> Rational:
        return sum(self.coeffs.values())

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get(-k) == v for k, v in self.coeffs.items())

    def __str__(self) -> str:
        return render_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentQ({render_laurent(self)})"


def render_laurent(chi: LaurentQ) -> str:
    """Text like ``2q^4 + 2q^2 + 3 + 2q^{-2} + 2q^{-4}``."""
    if not chi.coeffs:
        return "0"
    parts = []
    for k in sorted(chi.coeffs, reverse=True):
        c = Fraction(chi.coeffs[k])
        if k == 0:
            mono = ""
        elif k == 1:
            mono = "q"
        elif k > 0:
            mono = f"q^{k}" if k < 10 else f"q^{{{k}}}"
        else:
            mono = f"q^{{{k}}}"
        a = abs(c)
        num = str(a) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        body = num if not mono else (mono if a == 1 else num + mono)
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass
class BiDimTable:
    """Bigraded dimensions (i, j) -> count, complete for i + j <= bound."""

    bound: int
    dims: Dict[Tuple[int, int], Rational] = field(default_factory=dict)

    def __getitem__(self, ij: Tuple[int, int]) -> Rational:
        i, j = ij
        if i + j > self.bound:
            raise TruncationError(f"({i}, {j}) lies beyond the truncation bound {self.bound}")
        return self.dims.get((i, j), 0)

    def cells(self) -> Iterator[Tuple[int, int]]:
        for d in range(self.bound + 1):
            for i in range(d, -1, -1):
                yield (i, d - i)

    def degree_total(self, d: int) -> Rational:
        return sum(self[(i, d - i)] for i in range(d + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiDimTable):
            return NotImplemented
        b = min(self.bound, other.bound)
        return all(self[c] == other[c] for c in BiDimTable(b).cells())

    def restricted(self, bound: int) -> "BiDimTable":
        return BiDimTable(bound, {c: v for c, v in self.dims.items() if sum(c) <= bound and v})

    def render(self) -> str:
        """One line per total degree: ``d: c(i,j) ...`` with i descending."""
        lines = []
        for d in range(self.bound + 1):
            row = " ".join(str(self[(i, d - i)]) for i in range(d, -1, -1))
            lines.append(f"{d}: {row}")
        return "\n".join(lines) + "\n"


def bidim_table(action, bound: int) -> BiDimTable:
    t = BiDimTable(bound)
    for d in range(bound + 1):
        for i in range(d + 1):
            n = action.cell(i, d - i).dim
            if n:
                t.dims[(i, d - i)] = n
    return t


def sl2_character(table: BiDimTable, n: int) -> LaurentQ:
    if n > table.bound:
        raise TruncationError(f"degree {n} beyond the table bound {table.bound}")
    return LaurentQ({i - (n - i): table[(i, n - i)] for i in range(n + 1)})


def trivial_multiplicity(chi: LaurentQ) -> Rational:
    m = chi[0] - chi[2]
    if m < 0:
        raise CharacterError(f"negative trivial multiplicity {m} for {chi}")
    return m


# ---------------------------------------------------------------------------
# obstruction test


def _case_table(case, bound: int) -> BiDimTable:
    # invariant cells are memoized on the action, so rebuilding the table is cheap
    return bidim_table(case.action, bound)


def case_characters(case, upto: int) -> Dict[int, LaurentQ]:
    table = _case_table(case, upto)
    return {n: sl2_character(table, n) for n in range(upto + 1)}


def obstruction_sum(case, k: int, table: Optional[BiDimTable] = None) -> LaurentQ:
    """sum_{i=0}^{k+1} chi_{2k+2-i} chi_i for the case's invariant ring."""
    top = 2 * k + 2
    if table is None:
        table = _case_table(case, top)
    elif table.bound < top:
        raise TruncationError(f"obstruction test at k={k} needs characters through degree {top}")
    total = LaurentQ()
    for i in range(k + 2):
        total = total + sl2_character(table, top - i) * sl2_character(table, i)
    return total


def prop6_obstruction(case, k: int, table: Optional[BiDimTable] = None) -> bool:
    """True when D^k provably lies outside the bracket span (trivial multiplicity zero)."""
    if case.sl2 is None:
        raise ValueError(f"case {case.label} has no sl(2) data")
    return trivial_multiplicity(obstruction_sum(case, k, table)) == 0


# ---------------------------------------------------------------------------
# truncated expansion of rational series


def _two_var_terms(f: Poly) -> Dict[Tuple[int, int], Rational]:
    if f.ring.nvars != 2:
        raise ValueError("expected a polynomial in two variables")
    return {f.ring.exps(k): c for k, c in f.terms.items()}


def expand_rational(numerator: Poly, denominator: Poly, bound: int) -> BiDimTable:
    """Power-series coefficients of numerator/denominator through total degree ``bound``."""
    num = _two_var_terms(numerator)
    den = _two_var_terms(denominator)
    d0 = den.get((0, 0), 0)
    if not d0:
        raise ZeroDivisionError("denominator has zero constant term")
    inv = Fraction(1) / Fraction(d0)
    den_rest = [(e, c) for e, c in den.items() if e != (0, 0)]
    coeff: Dict[Tuple[int, int], Rational] = {}
    for d in range(bound + 1):
        for i in range(d, -1, -1):
            j = d - i
            acc = Fraction(num.get((i, j), 0))
            for (a, b), c in den_rest:
                if a <= i and b <= j:
                    prev = coeff.get((i - a, j - b))
                    if prev:
                        acc -= c * prev
            if acc:
                coeff[(i, j)] = _norm(acc * inv)
    return BiDimTable(bound, coeff)


def expand_h_series(numerator: Poly, denominator: Poly, nmax: int) -> Dict[int, LaurentQ]:
    """Coefficients chi_n(q) of h^n for a rational function in (h, q).

    The h^0 part of the denominator must be a single monomial c*q^e, which is
    the situation for chi(q, h) = Phi(hq, h/q) after clearing q-powers.
    """
    if numerator.ring.names != ("h", "q") or denominator.ring.names != ("h", "q"):
        raise ValueError("expected polynomials in (h, q)")

    def by_h(f: Poly) -> Dict[int, LaurentQ]:
        out: Dict[int, Dict[int, Rational]] = {}
        for k, c in f.terms.items():
            a, b = f.ring.exps(k)
            out.setdefault(a, {})[b] = c
        return {a: LaurentQ(v) for a, v in out.items()}

    num = by_h(numerator)
    den = by_h(denominator)
    lead = den.get(0)
    if lead is None or len(lead.coeffs) != 1:
        raise ZeroDivisionError("h^0 part of the denominator must be a single q-monomial")
    (e, c), = lead.coeffs.items()
    inv_c = Fraction(1) / Fraction(c)
    chis: Dict[int, LaurentQ] = {}
    for n in range(nmax + 1):
        acc = num.get(n, LaurentQ())
        for m, dm in den.items():
            if 1 <= m <= n:
                acc = acc - dm * chis[n - m]
        chis[n] = (acc * inv_c).shift(-e)
    return chis


XY = VarSet.free(["x", "y"])
HQ = VarSet.free(["h", "q"])


# ---------------------------------------------------------------------------
# closed-form generating functions of the invariant rings

CLOSED_FORMS = {
    "B2-phi": ("B2", "xy",
               "1 + x*y + 2*x^2*y^2 + x*y^3 + x^3*y + x^3*y^3 + x^4*y^4",
               "(1 + x^2)*(1 - x)^2*(1 + x)^2*(1 + y^2)*(1 - y)^2*(1 + y)^2"),
    "B2-chi": ("B2", "hq",
               "q^6 + h^2*q^6 + h^4*q^4 + 2*h^4*q^6 + h^4*q^8 + h^6*q^6 + h^8*q^6",
               "(h^2*q^2 + 1)*(h^2 + q^2)*(h*q + 1)^2*(q - h)^2*(h + q)^2*(h*q - 1)^2"),
    "A2-phi": ("A2", "xy",
               "1 + x*y + x*y^2 + x^2*y + x^2*y^2 + x^3*y^3",
               "(x + 1)*(x^2 + x + 1)*(1 - x)^2*(y + 1)*(y^2 + y + 1)*(1 - y)^2"),
    "A2-chi": ("A2", "hq",
               "q^5 + h^2*q^5 + h^3*q^4 + h^3*q^6 + h^4*q^5 + h^6*q^5",
               "(h*q + 1)*(h + q)*(h^2 + h*q + q^2)*(h^2*q^2 + h*q + 1)*(h - q)^2*(1 - h*q)^2"),
    "A2-phi-module": ("A2", "xy",
                      "1 + x*y + x*y^2 + x^2*y + x^2*y^2 + x^3*y^3",
                      "(1 - x^2)*(1 - x^3)*(1 - y^2)*(1 - y^3)"),
}


def closed_form_mismatches(name: str, case, bound: int):
    """Cells where a closed-form series disagrees with counted dimensions.

    Returns ``(cell, series value, counted value)`` triples; empty means the
    two computations agree through total degree ``bound``.
    """
    case_name, kind, num, den = CLOSED_FORMS[name]
    if case.name != case_name:
        raise ValueError(f"{name} describes {case_name}, not {case.label}")
    table = _case_table(case, bound)
    bad = []
    if kind == "xy":
        series = expand_rational(parse_poly(num, XY), parse_poly(den, XY), bound)
        for c in table.cells():
            if series[c] != table[c]:
                bad.append((c, series[c], table[c]))
    else:
        chis = expand_h_series(parse_poly(num, HQ), parse_poly(den, HQ), bound)
        for n in range(bound + 1):
            counted = sl2_character(table, n)
            if chis[n] != counted:
                bad.append((n, render_laurent(chis[n]), render_laurent(counted)))
    return bad
