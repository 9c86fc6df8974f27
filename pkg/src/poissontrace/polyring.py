"""Sparse multivariate polynomials over the rationals.

A monomial is stored as a single Python int packing one byte per variable,
first variable in the most significant byte.  Multiplying monomials is then
integer addition, and comparing packed keys of equal total degree is
lexicographic comparison of exponent vectors, so graded-lex order is the sort
key ``(degree, key)``.  Total degree is capped at 64, which keeps every
exponent inside its byte.
"""

from __future__ import annotations

import ast
import operator
from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exactalg import RatMatrix, format_rat

MAX_DEGREE = 64
_BITS = 8
_MASK = (1 << _BITS) - 1

Monomial = Tuple[int, ...]
BiDegree = Tuple[int, int]

X_SIDE = "x"
Y_SIDE = "y"


class VarSetMismatch(ValueError):
    pass


class CoverageError(ValueError):
    """A polynomial has a monomial outside the basis it is vectorized against."""


class VarSet:
    """Ordered variable names grouped into symplectic (x, y) pairs."""

    def __init__(self, names: Sequence[str], pairs: Optional[Sequence[Tuple[int, int]]] = None):
        self.names: Tuple[str, ...] = tuple(names)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("duplicate variable names")
        if pairs is None:
            if n % 2:
                raise ValueError("odd variable count needs explicit pairs")
            pairs = [(2 * i, 2 * i + 1) for i in range(n // 2)]
        self.pairs: Tuple[Tuple[int, int], ...] = tuple((int(a), int(b)) for a, b in pairs)
        seen = sorted(i for p in self.pairs for i in p)
        if seen != list(range(n)) and self.pairs:
            raise ValueError("pairs must partition the variables")
        self.side: Tuple[str, ...] = tuple(
            X_SIDE if any(i == a for a, _ in self.pairs) else Y_SIDE for i in range(n)
        )
        self.index = {name: i for i, name in enumerate(self.names)}
        self.shifts = tuple(_BITS * (n - 1 - i) for i in range(n))
        self._deg_cache: Dict[int, int] = {}
        self._bideg_cache: Dict[int, BiDegree] = {}

    @classmethod
    def free(cls, names: Sequence[str]) -> "VarSet":
        """Variable set without a symplectic pairing (auxiliary rings)."""
        obj = cls.__new__(cls)
        obj.names = tuple(names)
        obj.pairs = ()
        obj.side = tuple(X_SIDE for _ in names)
        obj.index = {name: i for i, name in enumerate(obj.names)}
        n = len(obj.names)
        obj.shifts = tuple(_BITS * (n - 1 - i) for i in range(n))
        obj._deg_cache = {}
        obj._bideg_cache = {}
        return obj

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, VarSet) and (self.names, self.pairs) == (other.names, other.pairs)

    def __hash__(self) -> int:
        return hash((self.names, self.pairs))

    def __repr__(self) -> str:
        return f"VarSet({list(self.names)})"

    # monomial keys -------------------------------------------------------
    def key(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent length mismatch")
        if sum(exps) > MAX_DEGREE:
            raise OverflowError(f"monomial degree exceeds {MAX_DEGREE}")
        k = 0
        for e in exps:
            if e < 0:
                raise ValueError("negative exponent")
            k = (k << _BITS) | e
        return k

    def exps(self, key: int) -> Monomial:
        return tuple((key >> s) & _MASK for s in self.shifts)

    def degree(self, key: int) -> int:
        d = self._deg_cache.get(key)
        if d is None:
            d = 0
            k = key
            while k:
                d += k & _MASK
                k >>= _BITS
            self._deg_cache[key] = d
        return d

    def bidegree(self, key: int) -> BiDegree:
        b = self._bideg_cache.get(key)
        if b is None:
            e = self.exps(key)
            i = sum(x for x, s in zip(e, self.side) if s == X_SIDE)
            b = (i, sum(e) - i)
            self._bideg_cache[key] = b
        return b

    def var(self, name_or_index) -> "Poly":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else int(name_or_index)
        return Poly(self, {1 << self.shifts[i]: 1})

    def gens(self) -> List["Poly"]:
        return [self.var(i) for i in range(self.nvars)]

    def one(self) -> "Poly":
        return Poly(self, {0: 1})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def const(self, c: Rational) -> "Poly":
        return Poly(self, {0: c} if c else {})

    def grlex(self, key: int) -> Tuple[int, int]:
        return (self.degree(key), key)

    def namespace(self) -> Dict[str, "Poly"]:
        return {name: self.var(i) for i, name in enumerate(self.names)}


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Immutable sparse polynomial; ``terms`` maps packed monomial keys to nonzero rationals."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: VarSet, terms: Optional[Mapping[int, Rational]] = None):
        self.ring = ring
        self.terms: Dict[int, Rational] = {k: _norm(v) for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, ring: VarSet, terms: Dict[int, Rational]) -> "Poly":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_exps(cls, ring: VarSet, data: Mapping[Monomial, Rational]) -> "Poly":
        return cls(ring, {ring.key(e): c for e, c in data.items()})

    # ring structure ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise VarSetMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = _norm(nv)
            else:
                del out[k]
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, 0) - v
            if nv:
                out[k] = _norm(nv)
            else:
                del out[k]
        return Poly._raw(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Rational) -> "Poly":
        if not c:
            return Poly._raw(self.ring, {})
        return Poly._raw(self.ring, {k: _norm(v * c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly._raw(self.ring, {})
        if self.degree() + other.degree() > MAX_DEGREE:
            raise OverflowError(f"product degree exceeds {MAX_DEGREE}")
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[int, Rational] = {}
        get = out.get
        for kb, vb in b.items():
            for ka, va in a.items():
                k = ka + kb
                out[k] = get(k, 0) + va * vb
        return Poly._raw(self.ring, {k: _norm(v) for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(c))
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # gradings -----------------------------------------------------------------
    def degree(self) -> int:
        """Total degree (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        deg = self.ring.degree
        return max(deg(k) for k in self.terms)

    def is_homogeneous(self) -> bool:
        deg = self.ring.degree
        return len({deg(k) for k in self.terms}) <= 1

    def bidegrees(self) -> set:
        bd = self.ring.bidegree
        return {bd(k) for k in self.terms}

    def bidegree(self) -> Optional[BiDegree]:
        """The bidegree if the polynomial is bihomogeneous and nonzero, else None."""
        b = self.bidegrees()
        return next(iter(b)) if len(b) == 1 else None

    def homogeneous_components(self, grading: Callable[[int], object]) -> Dict[object, "Poly"]:
        parts: Dict[object, Dict[int, Rational]] = {}
        for k, v in self.terms.items():
            parts.setdefault(grading(k), {})[k] = v
        return {g: Poly._raw(self.ring, t) for g, t in parts.items()}

    # calculus -----------------------------------------------------------------
    def partial(self, v) -> "Poly":
        i = self.ring.index[v] if isinstance(v, str) else int(v)
        s = self.ring.shifts[i]
        unit = 1 << s
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & _MASK
            if e:
                out[k - unit] = c * e
        return Poly._raw(self.ring, out)

    def coefficient(self, exps: Sequence[int]) -> Rational:
        return self.terms.get(self.ring.key(exps), 0)

    def leading(self) -> Tuple[int, Rational]:
        """(key, coefficient) of the graded-lex largest term."""
        k = max(self.terms, key=self.ring.grlex)
        return k, self.terms[k]

    def sorted_terms(self) -> List[Tuple[int, Rational]]:
        g = self.ring.grlex
        return sorted(self.terms.items(), key=lambda kv: g(kv[0]), reverse=True)

    def linear_substitute(self, m: RatMatrix) -> "Poly":
        return linear_substitute(self, m)

    def exact_divide(self, divisor: "Poly") -> "Poly":
        q, r = divide(self, divisor)
        if r:
            raise ArithmeticError("division leaves a nonzero remainder")
        return q

    # rendering ----------------------------------------------------------------
    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Poly({render(self)})"


def render(f: Poly) -> str:
    """Canonical text: graded-lex descending terms, coefficients as num/den."""
    if not f.terms:
        return "0"
    names = f.ring.names
    pieces = []
    for k, c in f.sorted_terms():
        c = Fraction(c)
        mono = []
        for name, e in zip(names, f.ring.exps(k)):
            if e == 1:
                mono.append(name)
            elif e > 1:
                mono.append(f"{name}^{e}")
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = format_rat(a)
        elif a == 1:
            body = "*".join(mono)
        else:
            body = format_rat(a) + "*" + "*".join(mono)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def mul(f: Poly, g: Poly) -> Poly:
    return f * g


def partial(f: Poly, v) -> Poly:
    return f.partial(v)


class Substitution:
    """Memoized linear change of variables ``v_i -> sum_j m[i][j] v_j``.

    Images of powers of single variables and of the x-side / y-side parts of
    a monomial are cached, which makes repeated use (Reynolds averaging) cheap.
    """

    def __init__(self, ring: VarSet, m: RatMatrix):
        if m.rows != m.cols or m.rows != ring.nvars:
            raise ValueError(f"substitution matrix must be {ring.nvars}x{ring.nvars}")
        self.ring = ring
        self.matrix = m
        rows = m.sparse_rows()
        self.images = [Poly(ring, {1 << ring.shifts[j]: v for j, v in rows[i].items()}) for i in range(ring.nvars)]
        self._pow: Dict[Tuple[int, int], Poly] = {}
        self._mono: Dict[int, Poly] = {0: ring.one()}
        xs = 0
        for i, s in enumerate(ring.side):
            if s == X_SIDE:
                xs |= _MASK << ring.shifts[i]
        self._xmask = xs

    def power(self, i: int, e: int) -> Poly:
        if e == 0:
            return self.ring.one()
        key = (i, e)
        p = self._pow.get(key)
        if p is None:
            p = self.images[i] if e == 1 else self.power(i, e - 1) * self.images[i]
            self._pow[key] = p
        return p

    def _part(self, key: int) -> Poly:
        p = self._mono.get(key)
        if p is None:
            ring = self.ring
            # peel off the last variable present
            for i in range(ring.nvars - 1, -1, -1):
                e = (key >> ring.shifts[i]) & _MASK
                if e:
                    rest = key - (e << ring.shifts[i])
                    p = self._part(rest) * self.power(i, e)
                    break
            self._mono[key] = p
        return p

    def monomial(self, key: int) -> Poly:
        xk = key & self._xmask
        yk = key - xk
        if xk == 0 or yk == 0:
            return self._part(key)
        return self._part(xk) * self._part(yk)

    def __call__(self, f: Poly) -> Poly:
        acc: Dict[int, Rational] = {}
        for k, c in f.terms.items():
            for k2, c2 in self.monomial(k).terms.items():
                acc[k2] = acc.get(k2, 0) + c * c2
        return Poly(self.ring, acc)


def linear_substitute(f: Poly, m: RatMatrix) -> Poly:
    """Replace each variable by its image row of ``m``."""
    if m.rows != m.cols:
        raise ValueError("substitution matrix must be square")
    return Substitution(f.ring, m)(f)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def monomial_basis(vars: VarSet, d: int, filter: Optional[Callable[[Monomial], bool]] = None) -> List[Monomial]:
    """Exponent vectors of degree ``d`` in graded-lex descending order."""
    if d < 0:
        return []
    if vars.nvars == 0:
        return [()] if d == 0 else []
    out = list(_compositions(d, vars.nvars))
    if filter is not None:
        out = [e for e in out if filter(e)]
    return out


def bimonomial_basis(vars: VarSet, i: int, j: int, filter: Optional[Callable[[Monomial], bool]] = None) -> List[Monomial]:
    """Exponent vectors of bidegree (i, j), in graded-lex descending order."""
    xs = [k for k, s in enumerate(vars.side) if s == X_SIDE]
    ys = [k for k, s in enumerate(vars.side) if s == Y_SIDE]
    out = []
    for xe in _compositions(i, len(xs)) if xs else ([()] if i == 0 else []):
        for ye in _compositions(j, len(ys)) if ys else ([()] if j == 0 else []):
            e = [0] * vars.nvars
            for k, v in zip(xs, xe):
                e[k] = v
            for k, v in zip(ys, ye):
                e[k] = v
            out.append(tuple(e))
    out.sort(reverse=True)
    if filter is not None:
        out = [e for e in out if filter(e)]
    return out


def vectorize(f: Poly, basis: Sequence) -> List[Rational]:
    """Coefficient row of ``f`` against an ordered monomial basis (exponent tuples or keys)."""
    ring = f.ring
    keys = [b if isinstance(b, int) else ring.key(b) for b in basis]
    pos = {k: i for i, k in enumerate(keys)}
    row: List[Rational] = [0] * len(keys)
    for k, c in f.terms.items():
        i = pos.get(k)
        if i is None:
            raise CoverageError(f"monomial {ring.exps(k)} not in basis")
        row[i] = c
    return row


def divide(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    """Multivariate division by a single polynomial in graded-lex order."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    gk, gc = g.leading()
    gexps = ring.exps(gk)
    q: Dict[int, Rational] = {}
    r: Dict[int, Rational] = {}
    p = Poly(ring, f.terms)
    while p:
        pk, pc = p.leading()
        pexps = ring.exps(pk)
        if all(a >= b for a, b in zip(pexps, gexps)):
            mk = pk - gk
            c = Fraction(pc) / gc
            q[mk] = q.get(mk, 0) + c
            p = p - Poly._raw(ring, {mk: _norm(c)}) * g
        else:
            r[pk] = pc
            p = Poly._raw(ring, {k: v for k, v in p.terms.items() if k != pk})
    return Poly(ring, q), Poly(ring, r)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def eval_expr(text: str, namespace: Mapping[str, object]):
    """Evaluate an arithmetic expression over names bound to polynomials.

    Supports ``+ - * / **`` (``^`` is read as a power), integer literals and
    names; division is only by rationals.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in namespace:
                raise NameError(f"unknown name {node.id!r}")
            return namespace[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, int):
                    raise ValueError("exponent must be an integer literal")
                return left ** right
            if isinstance(node.op, ast.Div):
                if isinstance(left, int) and isinstance(right, int):
                    return Fraction(left, right)
                if not isinstance(right, (int, Fraction)):
                    raise ValueError("division by a polynomial")
                return left * (Fraction(1) / right)
            op = _BINOPS.get(type(node.op))
            if op is None:
                raise ValueError(f"unsupported operator {type(node.op).__name__}")
            return op(left, right)
        raise ValueError(f"unsupported syntax: {ast.dump(node)}")

    return ev(tree)


def parse_poly(text: str, ring: VarSet, extra: Optional[Mapping[str, object]] = None) -> Poly:
    ns: Dict[str, object] = ring.namespace()
    if extra:
        ns.update(extra)
    value = eval_expr(text, ns)
    if isinstance(value, Poly):
        return value
    return ring.const(Fraction(value))

