"""Command-line entry point: ``poissontrace <command> --case ... [options]``.

Every command builds a JSON-compatible report and exits 0 exactly when all
checks embedded in that report pass.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Dict, List, Optional, Tuple

from .cases import MODES, BoundTooSmallError, CaseSpec, CustomCaseError, UnknownCaseError, build_case
from .characters import CLOSED_FORMS, case_characters, closed_form_mismatches, prop6_obstruction, render_laurent, trivial_multiplicity
from .groups import conjugacy_classes, hh0_dim
from .hp0 import hp0
from .presentations import (
    GenerationError,
    ModuleBasisError,
    jacobi_check_abstract,
    named_generators,
    verify_bracket_table,
    verify_generation,
    verify_module_basis,
    verify_relations,
)
from .weyl import closed_form_commutator, product_commutator, prop17_sum, render_weyl

DEFAULT_SEED = 20240601

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN_CASE = 3
EXIT_BAD_CUSTOM = 4
EXIT_BOUND = 5


def _parse_gens(text: Optional[str]):
    """``"011;101"`` -> [(0, 1, 1), (1, 0, 1)]."""
    if text is None:
        return None
    return [tuple(int(c) for c in part.strip()) for part in text.split(";") if part.strip()]


def _case(args) -> CaseSpec:
    case = build_case(args.case, n=args.n, gens=_parse_gens(args.gens), custom_file=args.custom)
    return case


def _recipe(args, bound):
    return (args.case, args.n, _parse_gens(args.gens), args.custom, bound)


# ---------------------------------------------------------------------------
# commands; each returns (report, ok)


def cmd_hp0(args) -> Tuple[dict, bool]:
    case = _case(args).with_bound(args.bound)
    mode = args.mode or case.mode
    rep = hp0(case, mode, args.bound, jobs=args.jobs, recipe=_recipe(args, args.bound))
    out = rep.to_json()
    out["seconds"] = round(rep.seconds, 3)
    checks = {"trailing_zeros": rep.trailing_zeros}
    if rep.agreement is not None:
        checks["agreement"] = rep.agreement
    if case.expected_hp0 is not None:
        checks["matches_expected"] = rep.total == case.expected_hp0
        out["expected"] = case.expected_hp0
    out["checks"] = checks
    return out, all(checks.values())


def cmd_hh0(args) -> Tuple[dict, bool]:
    case = _case(args)
    classes = conjugacy_classes(case.action)
    value = hh0_dim(case.action)
    out = {
        "case": case.label,
        "group_order": len(case.action.close()),
        "classes": [{"size": c.size, "fixed_dim": c.fixed_dim} for c in classes],
        "hh0": value,
    }
    ok = True
    if case.expected_hh0 is not None:
        out["expected"] = case.expected_hh0
        ok = value == case.expected_hh0
    return out, ok


def cmd_characters(args) -> Tuple[dict, bool]:
    case = _case(args)
    upto = args.bound if args.bound is not None else 10
    chis = case_characters(case, upto)
    out = {"case": case.label, "bound": upto, "characters": {str(n): render_laurent(c) for n, c in chis.items()}}
    ok = all(c.is_symmetric() for c in chis.values())
    for c in chis.values():
        trivial_multiplicity(c)
    if case.sl2 is not None:
        out["obstructed_powers"] = [k for k in range(0, (upto - 2) // 2 + 1) if prop6_obstruction(case, k)]
    return out, ok


def cmd_presentations(args) -> Tuple[dict, bool]:
    case = _case(args)
    out: Dict[str, object] = {"case": case.label}
    ok = True
    if case.name in ("A2", "B2", "G2"):
        rels = verify_relations(case)
        out["relations"] = [r.to_json() for r in rels]
        ok &= all(r.certified for r in rels)
        mb = args.bound if args.bound is not None else 10
        try:
            cells = verify_module_basis(case, mb)
            out["module_basis"] = {"bound": mb, "cells": len(cells), "ok": True}
        except ModuleBasisError as exc:
            out["module_basis"] = {"bound": mb, "ok": False, "error": str(exc)}
            ok = False
    if case.name == "A2":
        table = verify_bracket_table(case)
        bad = [{"row": e.row, "col": e.col, "printed": e.printed, "residual": e.residual} for e in table if e.residual != "0"]
        out["bracket_table"] = {"entries": len(table), "discrepancies": bad}
        jac = jacobi_check_abstract()
        nonzero = {",".join(k): v for k, v in jac.items() if v != "0"}
        out["jacobi"] = {"triples": len(jac), "nonzero": nonzero}
        ok &= not bad and not nonzero
    gb = 12 if args.bound is None else args.bound
    try:
        gens = named_generators(case)
        rep = verify_generation(case, gens, gb, strict=False)
        out["generation"] = {"bound": gb, "generators": gens.names, "first_failure": rep.first_failure}
        ok &= rep.ok
    except (ValueError, GenerationError) as exc:
        out["generation"] = {"bound": gb, "error": str(exc)}
        ok = False
    return out, ok


def cmd_weyl(args) -> Tuple[dict, bool]:
    n = args.n if args.n is not None else 3
    if args.closed_form:
        direct = product_commutator(n)
        closed = closed_form_commutator(n)
        out = {"k": n, "commutator": render_weyl(direct), "closed_form": render_weyl(closed)}
        return out, direct == closed
    total = prop17_sum(n)
    out = {"n": n, "constant_term": str(total.constant_term()), "residual": render_weyl(total)}
    return out, total == 2


def cmd_crosscheck(args) -> Tuple[dict, bool]:
    case = _case(args)
    bound = args.bound if args.bound is not None else 12
    names = [k for k, v in CLOSED_FORMS.items() if v[0] == case.name]
    if not names:
        raise ValueError(f"no closed-form series recorded for case {case.label}")
    out = {"case": case.label, "bound": bound, "series": {}}
    ok = True
    for name in names:
        bad = closed_form_mismatches(name, case, bound)
        out["series"][name] = [[str(c), str(a), str(b)] for c, a, b in bad]
        ok &= not bad
    return out, ok


COMMANDS: Dict[str, Callable] = {
    "hp0": cmd_hp0,
    "hh0": cmd_hh0,
    "characters": cmd_characters,
    "presentations": cmd_presentations,
    "weyl": cmd_weyl,
    "crosscheck": cmd_crosscheck,
}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poissontrace", description="Exact HP0 / HH0 computations for symplectic quotients.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--case", default="B2", help="Cyclic, A2, B2, G2, Pm1, Z3 or Custom")
        p.add_argument("--n", type=int, help="size parameter for Cyclic, Pm1, Z3 (and the Weyl rank)")
        p.add_argument("--gens", help='Pm1 subgroup generators as 0/1 words, e.g. "011;101"')
        p.add_argument("--custom", help="JSON file describing a custom case")
        p.add_argument("--mode", choices=MODES)
        p.add_argument("--bound", type=int, help="degree bound override")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--jobs", type=int, default=1)
        if name == "weyl":
            g = p.add_mutually_exclusive_group()
            g.add_argument("--prop17", action="store_true", help="signed commutator sum over all 2^n assignments")
            g.add_argument("--closed-form", action="store_true", help="compare [p1..pk, q1..qk] with its closed form")
    return parser


def _validate(parser, args):
    if args.bound is not None and args.bound <= 0:
        parser.error("--bound must be positive")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    if args.command == "weyl":
        n = 3 if args.n is None else args.n
        if not args.closed_form and (n < 1 or n % 2 == 0):
            parser.error("--prop17 needs an odd positive --n")
        if args.closed_form and n < 1:
            parser.error("--closed-form needs a positive --n")


def render_text(report: dict) -> str:
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict) and all(not isinstance(v, (dict, list)) for v in val.values()):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {json.dumps(v) if not isinstance(v, str) else v}" for k, v in val.items())
        elif isinstance(val, (dict, list)):
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
        elif isinstance(val, bool) or val is None:
            lines.append(f"{key}: {json.dumps(val)}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    t0 = time.perf_counter()
    try:
        report, ok = COMMANDS[args.command](args)
    except UnknownCaseError as exc:
        print(f"poissontrace: unknown case: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_CASE
    except CustomCaseError as exc:
        print(f"poissontrace: malformed custom case: {exc}", file=sys.stderr)
        return EXIT_BAD_CUSTOM
    except BoundTooSmallError as exc:
        print(f"poissontrace: bound too small: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ValueError as exc:
        print(f"poissontrace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report["command"] = args.command
    report["seed"] = args.seed
    report["ok"] = ok
    report.setdefault("seconds", round(time.perf_counter() - t0, 3))
    if args.format == "json":
        stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stdout.write(render_text(report))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
