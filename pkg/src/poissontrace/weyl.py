"""Weyl algebra A_n over Q in the normal-ordered basis p^alpha q^beta.

The only relation used is [p_i, q_i] = p_i q_i - q_i p_i = 1, so moving a
q past a p reads q p = p q - 1.  Different indices commute.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial
from numbers import Rational
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .exactalg import format_rat

Exps = Tuple[int, ...]
Key = Tuple[Exps, Exps]


class RankMismatch(ValueError):
    pass


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class WeylElement:
    """Finite sum of c * p^alpha q^beta (all p's to the left)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[Key, Rational]] = None):
        self.n = n
        self.terms: Dict[Key, Rational] = {}
        for (a, b), c in (terms or {}).items():
            if len(a) != n or len(b) != n:
                raise RankMismatch(f"exponent vectors must have length {n}")
            if c:
                self.terms[(tuple(a), tuple(b))] = _norm(c)

    # constructors ------------------------------------------------------------
    @classmethod
    def scalar(cls, n: int, c: Rational) -> "WeylElement":
        return cls(n, {((0,) * n, (0,) * n): c})

    @classmethod
    def p(cls, n: int, i: int) -> "WeylElement":
        a = [0] * n
        a[i] = 1
        return cls(n, {(tuple(a), (0,) * n): 1})

    @classmethod
    def q(cls, n: int, i: int) -> "WeylElement":
        b = [0] * n
        b[i] = 1
        return cls(n, {((0,) * n, tuple(b)): 1})

    # arithmetic --------------------------------------------------------------
    def _check(self, other: "WeylElement"):
        if other.n != self.n:
            raise RankMismatch(f"A_{self.n} vs A_{other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylElement.scalar(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return WeylElement(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylElement.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return WeylElement(self.n, {k: v * other for k, v in self.terms.items()})
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        out = WeylElement.scalar(self.n, 1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = WeylElement.scalar(self.n, other)
        return isinstance(other, WeylElement) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self.terms), default=-1)

    def constant_term(self) -> Rational:
        zero = (0,) * self.n
        return self.terms.get((zero, zero), 0)

    def is_scalar(self) -> bool:
        zero = (0,) * self.n
        return all(k == (zero, zero) for k in self.terms)

    def __str__(self):
        return render_weyl(self)

    def __repr__(self):
        return f"WeylElement({render_weyl(self)})"


def _one_index(b: int, c: int) -> Iterable[Tuple[int, int, int]]:
    """q^b p^c = sum_k (-1)^k k! C(b,k) C(c,k) p^(c-k) q^(b-k)."""
    for k in range(min(b, c) + 1):
        coef = (-1) ** k * factorial(k) * comb(b, k) * comb(c, k)
        yield c - k, b - k, coef


def weyl_mul(x: WeylElement, y: WeylElement) -> WeylElement:
    x._check(y)
    n = x.n
    out: Dict[Key, Rational] = {}
    for (a1, b1), c1 in x.terms.items():
        for (a2, b2), c2 in y.terms.items():
            # p^a1 (q^b1 p^a2) q^b2, reordered index by index
            expansions = [list(_one_index(b1[i], a2[i])) for i in range(n)]
            for choice in product(*expansions):
                coef = c1 * c2
                pa, qb = [], []
                for i, (pe, qe, c) in enumerate(choice):
                    coef *= c
                    pa.append(a1[i] + pe)
                    qb.append(qe + b2[i])
                key = (tuple(pa), tuple(qb))
                out[key] = out.get(key, 0) + coef
    return WeylElement(n, out)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return a * b - b * a


def render_weyl(w: WeylElement) -> str:
    if not w.terms:
        return "0"

    def order(k):
        a, b = k
        return (-(sum(a) + sum(b)), tuple(-x for x in a), tuple(-x for x in b))

    parts = []
    for k in sorted(w.terms, key=order):
        a, b = k
        c = Fraction(w.terms[k])
        mono = []
        for i, e in enumerate(a):
            if e:
                mono.append(f"p{i + 1}" + (f"^{e}" if e > 1 else ""))
        for i, e in enumerate(b):
            if e:
                mono.append(f"q{i + 1}" + (f"^{e}" if e > 1 else ""))
        mag = abs(c)
        if not mono:
            body = format_rat(mag)
        elif mag == 1:
            body = "*".join(mono)
        else:
            body = format_rat(mag) + "*" + "*".join(mono)
        parts.append(("-" if c < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out


def monomial(n: int, ps: Iterable[int] = (), qs: Iterable[int] = ()) -> WeylElement:
    """Normal-ordered product of the listed p's followed by the listed q's."""
    a = [0] * n
    b = [0] * n
    for i in ps:
        a[i] += 1
    for i in qs:
        b[i] += 1
    return WeylElement(n, {(tuple(a), tuple(b)): 1})


def closed_form_commutator(k: int) -> WeylElement:
    """sum_{j<k} sum_{i_1<..<i_j} (-1)^(k-j-1) p_{i_1}..p_{i_j} q_{i_1}..q_{i_j} in A_k."""
    out = WeylElement(k)
    for j in range(k):
        sign = (-1) ** (k - j - 1)
        for idx in combinations(range(k), j):
            out = out + monomial(k, idx, idx) * sign
    return out


def product_commutator(k: int) -> WeylElement:
    """[p_1 ... p_k, q_1 ... q_k] by direct normal ordering."""
    return commutator(monomial(k, range(k)), monomial(k, (), range(k)))


def signed_assignments(n: int):
    """The 2^n choices (x_i, y_i) in {(p_i, q_i), (q_i, p_i)} with their signs."""
    for flips in product((0, 1), repeat=n):
        sign = (-1) ** sum(flips)
        xs, ys = [], []
        for i, f in enumerate(flips):
            p, q = WeylElement.p(n, i), WeylElement.q(n, i)
            xs.append(q if f else p)
            ys.append(p if f else q)
        yield sign, xs, ys


def prop17_sum(n: int) -> WeylElement:
    """sum over the signed assignments of [x_1 ... x_n, y_1 ... y_n]."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    total = WeylElement(n)
    for sign, xs, ys in signed_assignments(n):
        X = WeylElement.scalar(n, 1)
        Y = WeylElement.scalar(n, 1)
        for x in xs:
            X = X * x
        for y in ys:
            Y = Y * y
        total = total + commutator(X, Y) * sign
    return total


def tensor_expansion(n: int) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int]:
    """Expand prod_i (p_i (x) q_i - q_i (x) p_i) into signed pairs of words.

    Words are recorded as tuples of letters 0 (p) / 1 (q) per index, left
    factor first; the result maps (left word, right word) to its sign.
    """
    terms: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = {((), ()): 1}
    for _ in range(n):
        nxt: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = {}
        for (l, r), s in terms.items():
            for letter_l, letter_r, sg in ((0, 1, 1), (1, 0, -1)):
                key = (l + (letter_l,), r + (letter_r,))
                nxt[key] = nxt.get(key, 0) + s * sg
        terms = {k: v for k, v in nxt.items() if v}
    return terms


def sl2_triple(n: int, i: int) -> Tuple[WeylElement, WeylElement, WeylElement]:
    """E = p_i^2/2, F = -q_i^2/2, H = -(p_i q_i + q_i p_i)/2."""
    p, q = WeylElement.p(n, i), WeylElement.q(n, i)
    E = p * p * Fraction(1, 2)
    F = q * q * Fraction(-1, 2)
    H = (p * q + q * p) * Fraction(-1, 2)
    return E, F, H
