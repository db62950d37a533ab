"""``orbitfold`` command line front end.

Every subcommand writes one UTF-8 JSON document (stdout or ``--out``) with a
``provenance`` block. Exit codes: 0 all requested invariants hold, 1 an
invariant failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from fractions import Fraction
from pathlib import Path

import flint
import numpy as np

from . import __version__
from .affine import AffineWeightSet, kac_peterson, modular_checks
from .cartan import Kind, WeightCoords, classify
from .catalog import PRESET_NAMES, algebra_from_json, load_algebra
from .characters import irreducible_multiplicities, verma_multiplicities, virasoro_specialize
from .errors import OrbitfoldError
from .fold import fold, validate_automorphism

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fracs(text: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.replace(" ", "").split(",") if x != ""]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _document(spec: str):
    """Parsed JSON if ``spec`` is inline JSON or a JSON file, else None."""
    s = spec.strip()
    if s.startswith("[") or s.startswith("{"):
        try:
            return json.loads(s)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad inline JSON: {exc}") from None
    p = Path(spec)
    if p.suffix == ".json" or p.is_file():
        try:
            return json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {spec}: {exc}") from None
    return None


def _algebra(args):
    doc = _document(args.algebra)
    if doc is None:
        return load_algebra(args.algebra), None
    if isinstance(doc, list):
        doc = {"cartan": doc}
    return algebra_from_json(doc), doc


def _automorphism(args, cm, doc):
    perm = args.perm
    if perm is None and doc is not None:
        perm = doc.get("automorphism", {}).get("perm")
    if perm is None:
        raise UsageError("--perm is required")
    if isinstance(perm, str):
        perm = _ints(perm)
    return validate_automorphism(cm, perm)


def _weight(text, cm, grade=None) -> WeightCoords:
    labels = _fracs(text)
    if len(labels) != cm.n:
        raise UsageError(f"highest weight needs {cm.n} labels")
    return WeightCoords(tuple(labels), Fraction(grade or 0))


def _algebra_block(cm) -> dict:
    return cm.to_json()


# ---------------------------------------------------------------------------
# commands; each returns (document, ok)


def cmd_validate(args):
    cm, _ = _algebra(args)
    return {"algebra": _algebra_block(cm), "valid": True}, True


def cmd_classify(args):
    cm, _ = _algebra(args)
    kind, hyper = classify(cm)
    out = {"algebra": _algebra_block(cm), "kind": kind.value, "hyperbolic": hyper}
    if kind is Kind.AFFINE:
        out["dual_coxeter"] = str(cm.dual_coxeter)
    return out, True


def cmd_fold(args):
    cm, doc = _algebra(args)
    aut = _automorphism(args, cm, doc)
    fr = fold(cm, aut)
    out = {
        "algebra": _algebra_block(cm),
        "automorphism": {"perm": list(aut.perm), "order": aut.order},
        "fold": fr.to_json(),
        "folded": _algebra_block(fr.folded),
    }
    if fr.grade_shift is not None:
        out["grade_shift"] = [str(x) for x in fr.grade_shift]
    return out, True


def cmd_char(args):
    cm, _ = _algebra(args)
    hw = _weight(args.hw, cm)
    if args.verma:
        table = verma_multiplicities(cm, hw, depth=args.depth, max_grade=args.max_grade)
    else:
        table = irreducible_multiplicities(cm, hw, depth=args.depth, max_grade=args.max_grade)
    out = {"algebra": _algebra_block(cm), "table": table.to_json()}
    if cm.kind is Kind.AFFINE and args.qorder:
        ws = AffineWeightSet(cm, cm.level(hw))
        delta = ws.conformal_weight(hw) if hw.labels and all(x.denominator == 1 for x in hw.labels) else None
        out["virasoro"] = virasoro_specialize(table, args.qorder, delta, ws.central_charge).to_json()
    return out, True


def cmd_twine(args):
    from .twining import (
        build_oracle_module,
        compare_tables,
        is_rotation,
        oracle_checks,
        ordinary_table,
        property_report,
        twining_character_oracle,
        twining_character_via_orbit,
        twining_rotation_special_case,
    )

    cm, doc = _algebra(args)
    aut = _automorphism(args, cm, doc)
    hw = _weight(args.hw, cm)
    out = {"algebra": _algebra_block(cm), "automorphism": {"perm": list(aut.perm), "order": aut.order}}
    ok = True
    if is_rotation(cm, aut):
        series = twining_rotation_special_case(cm, aut, hw, args.qorder or 6, modified=True)
        out["rotation"] = series.to_json()
        if args.verify_oracle:
            mod = build_oracle_module(cm, aut, hw, args.depth, max_grade=args.max_grade, max_depth=None)
            tab = twining_character_oracle(mod)
            out["oracle"] = tab.to_json()
            out["oracle_checks"] = oracle_checks(mod)
            ok = out["oracle_checks"]["ok"]
        return out, ok
    fr = fold(cm, aut)
    lam = hw
    if args.verma:
        from .twining import generic_symmetric_weight

        lam = generic_symmetric_weight(cm, aut)
    table = twining_character_via_orbit(fr, lam, args.depth, max_grade=args.max_grade, verma=args.verma)
    out["twining"] = table.to_json()
    out["folded"] = _algebra_block(fr.folded)
    ordinary = ordinary_table(cm, lam, args.depth, max_grade=args.max_grade, verma=args.verma)
    props = property_report(table, ordinary, fr)
    out["properties"] = props
    ok = props["ok"]
    if args.verify_oracle:
        mod = build_oracle_module(cm, aut, lam, args.depth, max_grade=args.max_grade, verma=args.verma, max_depth=None)
        diff = compare_tables(twining_character_oracle(mod), table)
        checks = oracle_checks(mod)
        out["oracle_diff"] = diff
        out["oracle_checks"] = checks
        ok = ok and not diff and checks["ok"]
    return out, ok


def cmd_smatrix(args):
    cm, _ = _algebra(args)
    if cm.kind is not Kind.AFFINE:
        raise UsageError("smatrix needs an affine algebra")
    ws = AffineWeightSet(cm, args.level)
    md = kac_peterson(ws)
    from .checks import _tolerance_flags

    rep = _tolerance_flags(modular_checks(md, args.tol), args.tol)
    return {"algebra": _algebra_block(cm), "weights": ws.to_json(), "modular": md.to_json(), "checks": rep}, rep["ok"]


def cmd_coset(args):
    from .coset import (
        branching_functions,
        build_coset,
        identification_group,
        orbit_constancy,
        prime_case_check,
        resolved_modular,
        resolve,
        selection_and_orbits,
        vacuum_count,
        verlinde_check,
        BranchingEngine,
    )

    levels = _ints(args.levels)
    if len(levels) != 2:
        raise UsageError("--levels takes two integers k1,k2")
    spec = build_coset(args.h, *levels)
    group = identification_group(spec)
    orbits = selection_and_orbits(spec, group)
    engine = BranchingEngine(spec, args.qorder)
    out = {"coset": spec.to_json(), "identification_group": group.to_json(), "orbits": [o.to_json() for o in orbits]}
    ok = True
    if not args.resolve:
        bf = branching_functions(spec, args.qorder, [o.representative for o in orbits], engine)
        out["branching"] = [{"representative": o.to_json()["representative"], "series": bf[o.representative].to_json()} for o in orbits]
        return out, ok
    res = resolve(spec, orbits, args.qorder, group, engine)
    md = resolved_modular(spec, orbits, group, engine)
    res.modular = md
    out.update(res.to_json())
    checks = {
        "modular": modular_checks(md, args.tol),
        "vacuum_count": vacuum_count(spec, res.fields),
        "orbit_constant": orbit_constancy(spec, orbits, min(3, args.qorder), engine),
    }
    if any(o.is_fixed_point for o in orbits) and len(group) in (2, 3, 5, 7):
        checks["prime_case"] = prime_case_check(spec, orbits, md, group, engine, args.tol)
    ok = checks["modular"]["ok"] and checks["vacuum_count"] == 1 and checks["orbit_constant"]
    ok = ok and checks.get("prime_case", {"ok": True})["ok"]
    if args.verlinde:
        ver = verlinde_check(md, 0, args.vtol)
        checks["verlinde"] = ver
        ok = ok and ver["ok"]
    out["checks"] = checks
    return out, ok


def cmd_check(args):
    from .checks import run_all, summary_line

    reports = run_all(args.tol)
    for r in reports:
        print(summary_line(r), file=sys.stderr)
    return {"criteria": reports, "ok": all(r["ok"] for r in reports)}, all(r["ok"] for r in reports)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orbitfold", description="Orbit Lie algebras, twining characters and coset resolution.")
    p.add_argument("--version", action="version", version=f"orbitfold {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("--algebra", required=True, help=f"preset ({', '.join(PRESET_NAMES)}, ...), JSON file or inline JSON matrix")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        return sp

    common(sub.add_parser("validate", help="validate a Cartan matrix"))
    common(sub.add_parser("classify", help="finite / affine / indefinite"))
    sp = common(sub.add_parser("fold", help="orbit Lie algebra of a diagram automorphism"))
    sp.add_argument("--perm")
    sp = common(sub.add_parser("char", help="weight multiplicities"))
    sp.add_argument("--hw", required=True)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--max-grade", type=int)
    sp.add_argument("--verma", action="store_true")
    sp.add_argument("--qorder", type=int, default=0)
    sp = common(sub.add_parser("twine", help="twining characters"))
    sp.add_argument("--perm")
    sp.add_argument("--hw", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--max-grade", type=int)
    sp.add_argument("--verma", action="store_true")
    sp.add_argument("--verify-oracle", action="store_true")
    sp.add_argument("--qorder", type=int, default=6)
    sp = common(sub.add_parser("smatrix", help="Kac-Peterson modular data"))
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp = common(sub.add_parser("coset", help="diagonal coset spectrum"), algebra=False)
    sp.add_argument("--h", required=True)
    sp.add_argument("--levels", required=True)
    sp.add_argument("--qorder", type=int, default=6)
    sp.add_argument("--resolve", action="store_true")
    sp.add_argument("--verlinde", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--vtol", type=float, default=1e-6)
    sp = common(sub.add_parser("check", help="run the acceptance suite"), algebra=False)
    sp.add_argument("--tol", type=float, default=None, help="override the unitarity tolerance")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "fold": cmd_fold,
    "char": cmd_char,
    "twine": cmd_twine,
    "smatrix": cmd_smatrix,
    "coset": cmd_coset,
    "check": cmd_check,
}


def _provenance(args) -> dict:
    inputs = {k: v for k, v in vars(args).items() if k not in ("out",) and v is not None}
    trunc = {k: inputs[k] for k in ("depth", "max_grade", "qorder") if k in inputs}
    return {
        "tool": "orbitfold",
        "version": __version__,
        "inputs": inputs,
        "truncation": trunc,
        "versions": {"python": platform.python_version(), "numpy": np.__version__, "python-flint": flint.__version__},
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False, default=str)


def _check_args(args):
    for key in ("depth", "max_grade", "qorder", "level"):
        v = getattr(args, key, None)
        if v is not None and v < 0:
            raise UsageError(f"--{key.replace('_', '-')} must be nonnegative")


def run(argv=None) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        _check_args(args)
        doc, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"orbitfold: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE, {"error": {"type": "UsageError", "message": str(exc)}}
    except OrbitfoldError as exc:
        print(f"orbitfold: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE, {"error": {"type": type(exc).__name__, "message": str(exc)}}
    doc["ok"] = bool(ok)
    doc["provenance"] = _provenance(args)
    text = dumps(doc)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return (EXIT_OK if ok else EXIT_FAIL), doc


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
