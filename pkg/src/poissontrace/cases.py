"""Named case presets: variables, bracket, group action, sl(2) data and bounds.

Each preset is a :class:`CaseSpec`.  The sl(2)-bearing cases (B2, A2, G2)
also carry the hard-coded highest-weight pairs (P, Q, beta) that feed the
lowering-chain certificates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import RatMatrix, parse_rat
from .groups import DiagonalAction, MatrixAction
from .poisson import PoissonStructure, StructureError
from .polyring import Poly, VarSet, parse_poly
from .sl2tools import Sl2Context

MODES = ("bruteforce", "paper", "both")


class UnknownCaseError(ValueError):
    pass


class CustomCaseError(ValueError):
    """A custom case file is malformed."""


class BoundTooSmallError(ValueError):
    pass


@dataclass
class Witness:
    P: Poly
    Q: Poly
    beta: int


@dataclass
class CaseSpec:
    name: str
    params: Dict[str, object]
    vars: VarSet
    structure: PoissonStructure
    action: object
    scan_bound: int
    sl2: Optional[Sl2Context] = None
    witnesses: List[Witness] = field(default_factory=list)
    mode: str = "bruteforce"
    paper_bound: Optional[int] = None
    brute_force_ok: bool = True
    top_degree: Optional[int] = None
    expected_hp0: Optional[int] = None
    expected_hh0: Optional[int] = None

    @property
    def label(self) -> str:
        if self.name in ("Cyclic", "Z3"):
            return f"{self.name}{{{self.params['n']}}}"
        if self.name == "Pm1":
            gens = ";".join("".join(str(x) for x in g) for g in self.params["gens"])
            return f"Pm1{{{self.params['n']},{gens}}}"
        if self.name == "Custom":
            return f"Custom{{{self.params['file']}}}"
        return self.name

    @property
    def flavor(self) -> str:
        return self.action.flavor

    def parse(self, text: str, extra=None) -> Poly:
        return parse_poly(text, self.vars, extra)

    def with_bound(self, bound: Optional[int]) -> "CaseSpec":
        """Same case with the scan bound overridden (checked against the known top degree)."""
        if bound is None:
            return self
        if bound < 0:
            raise BoundTooSmallError("bound must be nonnegative")
        if self.top_degree is not None and bound < self.top_degree + 4:
            raise BoundTooSmallError(
                f"bound {bound} is below {self.top_degree + 4} (top contributing degree {self.top_degree} plus a window of 4)"
            )
        return replace(self, scan_bound=bound, paper_bound=bound)


def _perm_rows(n: int, images: Dict[int, int]) -> RatMatrix:
    entries = {}
    for i in range(n):
        entries[(i, images.get(i, i))] = 1
    return RatMatrix(n, n, entries)


# ---------------------------------------------------------------------------
# B2 on (x1, y1, x2, y2) with the standard bracket

def b2() -> CaseSpec:
    vars = VarSet(["x1", "y1", "x2", "y2"])
    ps = PoissonStructure.standard(vars)
    sign = RatMatrix(4, 4, {(0, 0): -1, (1, 1): -1, (2, 2): 1, (3, 3): 1})
    swap = _perm_rows(4, {0: 2, 1: 3, 2: 0, 3: 1})
    action = MatrixAction(vars, [sign, swap], ps)
    p = lambda s: parse_poly(s, vars)
    sl2 = Sl2Context(
        ps,
        action,
        E=p("(x1^2 + x2^2)/2"),
        F=p("-(y1^2 + y2^2)/2"),
        H=p("-(x1*y1 + x2*y2)"),
        D=p("x1*y2 - y1*x2"),
    )
    w = Witness(
        p("x1^4 + x2^4"),
        p("x1^4*x2*y2 + x1*y1*x2^4 - x1^3*y1*x2^2 - x1^2*x2^3*y2"),
        4,
    )
    return CaseSpec("B2", {}, vars, ps, action, 14, sl2, [w], top_degree=4, expected_hp0=2, expected_hh0=2)


# ---------------------------------------------------------------------------
# A2 and G2 on (a1, b1, a2, b2); a3 = -a1 - a2, b3 = -b1 - b2 are expressions

A2_PAIRING = [
    [0, 6, 0, -3],
    [-6, 0, 3, 0],
    [0, -3, 0, 6],
    [3, 0, -6, 0],
]


def _a2_setup():
    vars = VarSet(["a1", "b1", "a2", "b2"])
    ps = PoissonStructure(vars, RatMatrix.from_rows(A2_PAIRING))
    transposition = _perm_rows(4, {0: 2, 1: 3, 2: 0, 3: 1})
    # (123): a1 -> a2, a2 -> a3 = -a1 - a2, and the same on the b side
    three_cycle = RatMatrix(4, 4, {(0, 2): 1, (1, 3): 1, (2, 0): -1, (2, 2): -1, (3, 1): -1, (3, 3): -1})
    return vars, ps, [transposition, three_cycle]


def a3_namespace(vars: VarSet) -> Dict[str, Poly]:
    a1, b1, a2, b2 = (vars.var(n) for n in ("a1", "b1", "a2", "b2"))
    return {"a3": -a1 - a2, "b3": -b1 - b2}


def _a2_sl2(vars, ps, action) -> Sl2Context:
    p = lambda s: parse_poly(s, vars)
    return Sl2Context(
        ps,
        action,
        E=p("(a1^2 + a2^2 + a1*a2)/9"),
        F=p("-(b1^2 + b2^2 + b1*b2)/9"),
        H=p("-(2*a1*b1 + a1*b2 + b1*a2 + 2*a2*b2)/9"),
        D=p("a1*b2 - b1*a2"),
    )


def a2() -> CaseSpec:
    vars, ps, gens = _a2_setup()
    action = MatrixAction(vars, gens, ps)
    P = parse_poly("a1^2*a2 + a1*a2^2", vars)
    return CaseSpec(
        "A2", {}, vars, ps, action, 12, _a2_sl2(vars, ps, action), [Witness(P, P, 3)],
        top_degree=0, expected_hp0=1, expected_hh0=1,
    )


G2_P = "a1^6 + a2^6 + a3^6"
G2_Q = (
    "a1^6*(a2*b2 + a3*b3) + a2^6*(a1*b1 + a3*b3) + a3^6*(a1*b1 + a2*b2)"
    " - a1^5*b1*(a2^2 + a3^2) - a2^5*b2*(a1^2 + a3^2) - a3^5*b3*(a1^2 + a2^2)"
)


def g2() -> CaseSpec:
    vars, ps, gens = _a2_setup()
    gens = gens + [-RatMatrix.identity(4)]
    action = MatrixAction(vars, gens, ps)
    ns = a3_namespace(vars)
    w = Witness(parse_poly(G2_P, vars, ns), parse_poly(G2_Q, vars, ns), 6)
    return CaseSpec(
        "G2", {}, vars, ps, action, 20, _a2_sl2(vars, ps, action), [w],
        paper_bound=28, top_degree=8, expected_hp0=3, expected_hh0=3,
    )


# ---------------------------------------------------------------------------
# diagonal families


def cyclic(n: int) -> CaseSpec:
    if n < 2:
        raise ValueError("Cyclic needs n >= 2")
    action = DiagonalAction(n, 2, [(1, 1)])
    ps = PoissonStructure.standard(action.vars)
    return CaseSpec(
        "Cyclic", {"n": n}, action.vars, ps, action, 4 * n,
        top_degree=2 * n - 4, expected_hp0=n - 1, expected_hh0=n - 1,
    )


def pm1_generators_full(n: int) -> List[Tuple[int, ...]]:
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]


def pm1(n: int, gens: Optional[Sequence[Sequence[int]]] = None) -> CaseSpec:
    """Subgroup of (+-1)^n generated by 0/1 weight vectors (1 means a sign flip)."""
    if n < 1:
        raise ValueError("Pm1 needs n >= 1")
    gens = [tuple(int(x) % 2 for x in g) for g in (pm1_generators_full(n) if gens is None else gens)]
    action = DiagonalAction(2, n, gens)
    ps = PoissonStructure.standard(action.vars)
    elements = action.close()
    trivial_factor = any(all(g[i] == 0 for g in elements) for i in range(n))
    all_flip = tuple([1] * n) in set(elements)
    return CaseSpec(
        "Pm1", {"n": n, "gens": gens}, action.vars, ps, action, 2 * n + 4,
        top_degree=0, expected_hp0=0 if trivial_factor else 1, expected_hh0=1 if all_flip else 0,
    )


def z3(n: int) -> CaseSpec:
    if n < 2:
        raise ValueError("Z3 needs n >= 2")
    gens = []
    for i in range(n - 1):
        w = [0] * n
        w[i], w[i + 1] = 1, 2
        gens.append(tuple(w))
    action = DiagonalAction(3, n, gens)
    ps = PoissonStructure.standard(action.vars)
    return CaseSpec(
        "Z3", {"n": n}, action.vars, ps, action, 2 * n + 6,
        brute_force_ok=n <= 3, top_degree=2 * n,
        expected_hp0=2 ** n - 2, expected_hh0=(2 ** n + 2 * (-1) ** n) // 3,
    )


def all_pm1_subgroups(n: int) -> List[List[Tuple[int, ...]]]:
    """One generating set per subgroup of (Z/2)^n (as reduced echelon bases over F_2)."""
    vectors = [v for v in product((0, 1), repeat=n) if any(v)]
    seen = {}
    for mask in range(1 << len(vectors)):
        chosen = [vectors[i] for i in range(len(vectors)) if mask >> i & 1]
        if len(chosen) > n:
            continue
        span = {tuple([0] * n)}
        for v in chosen:
            span |= {tuple((a + b) % 2 for a, b in zip(s, v)) for s in span}
        key = frozenset(span)
        if key not in seen:
            seen[key] = chosen
    return [seen[k] for k in sorted(seen, key=lambda s: (len(s), sorted(s)))]


# ---------------------------------------------------------------------------
# custom JSON cases


def custom(path) -> CaseSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CustomCaseError(f"cannot read custom case {path}: {exc}") from exc
    try:
        return _custom_from_dict(data, str(path))
    except CustomCaseError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError, StructureError, NameError, SyntaxError) as exc:
        raise CustomCaseError(f"malformed custom case {path}: {exc}") from exc


def _custom_from_dict(data: dict, label: str) -> CaseSpec:
    if not isinstance(data, dict):
        raise CustomCaseError("custom case must be a JSON object")
    flavor = data.get("flavor")
    if flavor not in ("matrix", "diagonal"):
        raise CustomCaseError('"flavor" must be "matrix" or "diagonal"')
    pairs = int(data["pairs"])
    names = data.get("names")
    if names is None:
        names = [f"{s}{i}" for i in range(1, pairs + 1) for s in ("x", "y")]
    vars = VarSet(names)
    if len(vars.pairs) != pairs:
        raise CustomCaseError("names do not match the pair count")
    ps = PoissonStructure.from_json(vars, data["structure"]) if "structure" in data else PoissonStructure.standard(vars)
    if flavor == "diagonal":
        if "structure" in data:
            raise CustomCaseError("diagonal cases use the standard bracket")
        action = DiagonalAction(int(data["modulus"]), pairs, data["generators"], vars)
    else:
        gens = [RatMatrix.from_rows([[parse_rat(x) for x in row] for row in g]) for g in data["generators"]]
        action = MatrixAction(vars, gens, ps)
        action.close()
    bound = int(data.get("scan_bound", 8))
    sl2 = None
    witnesses = []
    if "sl2" in data:
        s = data["sl2"]
        p = lambda t: parse_poly(t, vars)
        sl2 = Sl2Context(ps, action, p(s["E"]), p(s["F"]), p(s["H"]), p(s["D"]))
        for w in s.get("witnesses", []):
            witnesses.append(Witness(p(w["P"]), p(w["Q"]), int(w["beta"])))
    return CaseSpec("Custom", {"file": label}, vars, ps, action, bound, sl2, witnesses)


# ---------------------------------------------------------------------------

CASE_NAMES = ("Cyclic", "A2", "B2", "G2", "Pm1", "Z3", "Custom")


def build_case(name: str, n: Optional[int] = None, gens=None, custom_file=None) -> CaseSpec:
    if name == "B2":
        return b2()
    if name == "A2":
        return a2()
    if name == "G2":
        return g2()
    if name in ("Cyclic", "Pm1", "Z3"):
        if n is None:
            raise UnknownCaseError(f"case {name} needs --n")
        if name == "Cyclic":
            return cyclic(n)
        if name == "Z3":
            return z3(n)
        return pm1(n, gens)
    if name == "Custom":
        if custom_file is None:
            raise UnknownCaseError("Custom case needs --custom <file>")
        return custom(custom_file)
    raise UnknownCaseError(f"unknown case {name!r}; expected one of {', '.join(CASE_NAMES)}")
