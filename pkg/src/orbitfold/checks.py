"""The acceptance suite: nine criteria, each returning a JSON-friendly report.

Shared by ``tests/test_acceptance.py`` and ``orbitfold check``.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import numpy as np

from .affine import AffineWeightSet, check_cd2, kac_peterson, modular_checks
from .cartan import Kind, WeightCoords
from .catalog import preset
from .characters import grade_of
from .coset import prime_case_check, solve_coset, vacuum_count, verlinde_check, orbit_constancy
from .fold import fold, is_symmetric, lift_weight, validate_automorphism
from .twining import (
    build_oracle_module,
    compare_tables,
    oracle_checks,
    ordinary_table,
    property_report,
    twining_character_oracle,
    twining_character_via_orbit,
    twining_rotation_special_case,
)
from .weyl import apply_word, coxeter_relation_check, hat_generator, reflect

UNITARY_TOL = 1e-9
VERLINDE_TOL = 1e-6

FOLD_FIXTURES = [
    ("A3", (2, 1, 0), [[2, -2], [-1, 2]]),
    ("D4", (2, 1, 3, 0), [[2, -3], [-1, 2]]),
    ("A2", (1, 0), [[2]]),
    ("A3aff", (2, 3, 0, 1), [[2, -2], [-2, 2]]),
    ("C4aff", (4, 3, 2, 1, 0), [[2, -2, 0], [-1, 2, -2], [0, -1, 2]]),
]

# (algebra, permutation, highest weight, depth)
THEOREM_FIXTURES = [
    ("A2", (1, 0), (1, 1), 6),
    ("A3", (2, 1, 0), (1, 0, 1), 6),
    ("D4", (2, 1, 3, 0), (0, 1, 0, 0), 10),
]
VERMA_DEPTH = 5
AFFINE_THEOREM = ("A3aff", (2, 3, 0, 1), (1, 0, 1, 0), 28, 4)  # depth, max grade

AFFINE_RELATION_FIXTURES = [
    ("A3aff", (2, 3, 0, 1)),
    ("C4aff", (4, 3, 2, 1, 0)),
    ("D4aff", (1, 0, 2, 4, 3)),
    ("A5aff", (3, 4, 5, 0, 1, 2)),
]


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        try:
            report = fn(*args, **kwargs)
        except Exception as exc:  # a crash is a failure with a reason
            report = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
        report["seconds"] = round(time.perf_counter() - t0, 3)
        report.setdefault("name", fn.__name__)
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _fixture(name, perm):
    cm = preset(name)
    aut = validate_automorphism(cm, perm)
    return cm, aut, fold(cm, aut)


# ---------------------------------------------------------------------------


@_timed
def criterion_1():
    """Folding fixtures give the expected matrices."""
    rows = []
    for name, perm, expected in FOLD_FIXTURES:
        _, _, fr = _fixture(name, perm)
        got = fr.folded.as_lists()
        rows.append({"algebra": name, "perm": list(perm), "folded": got, "ok": got == expected})
    return {"name": "folding fixtures", "fixtures": rows, "ok": all(r["ok"] for r in rows)}


def _theorem_rows(verma: bool):
    rows = []
    for name, perm, hw, depth in THEOREM_FIXTURES:
        cm, aut, fr = _fixture(name, perm)
        d = VERMA_DEPTH if verma else depth
        mod = build_oracle_module(cm, aut, hw, d, verma=verma)
        oracle = twining_character_oracle(mod)
        lam = mod.highest_weight
        orbit = twining_character_via_orbit(fr, lam, d, verma=verma)
        diff = compare_tables(oracle, orbit)
        checks = oracle_checks(mod)
        ordinary = ordinary_table(cm, lam, d, verma=verma)
        rows.append(
            {
                "algebra": name,
                "perm": list(perm),
                "highest_weight": [str(x) for x in lam.labels],
                "verma": verma,
                "depth": d,
                "entries": len(oracle.entries),
                "differences": diff,
                "oracle_checks": checks,
                "ok": not diff and checks["ok"],
                "_tables": (oracle, ordinary, fr),
            }
        )
    return rows


def _affine_theorem_row():
    name, perm, hw, depth, grade = AFFINE_THEOREM
    cm, aut, fr = _fixture(name, perm)
    mod = build_oracle_module(cm, aut, hw, depth, max_grade=grade, max_depth=None)
    oracle = twining_character_oracle(mod)
    orbit = twining_character_via_orbit(fr, hw, depth, max_grade=grade)
    diff = compare_tables(oracle, orbit)
    ordinary = ordinary_table(cm, hw, depth, max_grade=grade)
    return {
        "algebra": name,
        "perm": list(perm),
        "highest_weight": list(hw),
        "max_grade": grade,
        "depth": depth,
        "entries": len(oracle.entries),
        "differences": diff,
        "ok": not diff,
        "_tables": (oracle, ordinary, fr),
    }


def _strip(rows):
    return [{k: v for k, v in r.items() if not k.startswith("_")} for r in rows]


_THEOREM_CACHE: dict = {}


def _theorem_tables():
    if not _THEOREM_CACHE:
        _THEOREM_CACHE["rows"] = _theorem_rows(False) + _theorem_rows(True) + [_affine_theorem_row()]
    return _THEOREM_CACHE["rows"]


@_timed
def criterion_2():
    """Oracle twining characters equal the orbit-algebra characters."""
    rows = _theorem_tables()
    return {"name": "twining characters = orbit algebra characters", "fixtures": _strip(rows), "ok": all(r["ok"] for r in rows)}


@_timed
def criterion_3():
    """Rotation of A_2^(1): graded traces vanish above grade 0."""
    # the full rotation violates the linking condition, so no folding here
    cm = preset("A2aff")
    aut = validate_automorphism(cm, (1, 2, 0))
    hw = (1, 1, 1)
    grades = 4
    mod = build_oracle_module(cm, aut, hw, 40, max_grade=grades, max_depth=None)
    tab = twining_character_oracle(mod)
    traces = {}
    for n, v in tab.entries.items():
        g = grade_of(cm, n)
        traces[g] = traces.get(g, 0) + v
    per_grade = [traces.get(Fraction(m), 0) for m in range(grades + 1)]
    vanish = all(per_grade[m] == 0 for m in range(1, grades + 1))
    single = twining_rotation_special_case(cm, aut, hw, grades + 1)
    agrees = all(per_grade[m] == single.coeffs[m] for m in range(grades + 1))
    return {
        "name": "rotation special case",
        "graded_traces": [str(x) for x in per_grade],
        "vanish_grades_1_to_4": vanish,
        "matches_single_term": agrees,
        "ok": vanish and agrees and per_grade[0] == 1,
    }


def _random_weight(rng, n, affine):
    labels = tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(n))
    grade = Fraction(rng.randint(-12, 12), rng.randint(1, 6)) if affine else Fraction(0)
    return WeightCoords(labels, grade)


@_timed
def criterion_4(samples: int = 100, seed: int = 20240):
    """Embedded Weyl generators: involutions, commutation with w*, equivariance, Coxeter relations."""
    rng = random.Random(seed)
    rows = []
    for name, perm, _ in FOLD_FIXTURES:
        cm, aut, fr = _fixture(name, perm)
        affine = cm.kind is Kind.AFFINE
        lams = [_random_weight(rng, cm.n, affine) for _ in range(samples)]
        small = [_random_weight(rng, fr.folded.n, affine) for _ in range(samples)]
        words = [hat_generator(fr, k) for k in range(fr.folded.n)]
        invol = all(apply_word(cm, w, apply_word(cm, w, lam)) == lam for w in words for lam in lams)
        comm = all(
            aut.act_weight(apply_word(cm, w, lam)) == apply_word(cm, w, aut.act_weight(lam)) for w in words for lam in lams
        )
        equiv = all(
            apply_word(cm, words[k], lift_weight(fr, mu)) == lift_weight(fr, reflect(fr.folded, mu, k))
            for k in range(fr.folded.n)
            for mu in small
        )
        cox = coxeter_relation_check(fr, lams)
        rows.append(
            {
                "algebra": name,
                "perm": list(perm),
                "involution": invol,
                "commutes_with_automorphism": comm,
                "equivariant": equiv,
                "coxeter": {k: v for k, v in cox.items() if k != "violations"} | {"violations": cox["violations"]},
                "ok": invol and comm and equiv and cox["ok"],
            }
        )
    return {"name": "Weyl group embedding", "samples": samples, "fixtures": rows, "ok": all(r["ok"] for r in rows)}


@_timed
def criterion_5(levels=(1, 2, 3, 4, 6)):
    """N g_fold = g, folded level k/N, the conformal weight relation and its Lambda-independence."""
    rows = []
    for name, perm in AFFINE_RELATION_FIXTURES:
        cm, aut, fr = _fixture(name, perm)
        N = fr.N
        coxeter = N * fr.folded.dual_coxeter == cm.dual_coxeter
        level_ok = True
        per_level = []
        cd2 = True
        cd3 = True
        cd_form = True
        for k in levels:
            ws = AffineWeightSet(cm, k)
            sym = [w for w in ws.weights if is_symmetric(fr.orbit_data, w.labels)]
            if not sym:
                continue
            reps = [check_cd2(fr, w) for w in sym]
            level_ok &= all(Fraction(r["folded_level"]) == Fraction(k, N) for r in reps)
            cd2 &= all(r["equal"] for r in reps)
            diffs = {r["lhs"] - Fraction(r["delta_folded"]) for r in reps}
            cd3 &= len(diffs) == 1
            cd_form &= all(r["equal_cD"] for r in reps)
            per_level.append(
                {
                    "level": k,
                    "symmetric_weights": len(sym),
                    "constant": reps[0]["constant"],
                    "constant_cD": reps[0]["constant_cD"],
                    "differences": sorted(str(d) for d in diffs),
                }
            )
        rows.append(
            {
                "algebra": name,
                "perm": list(perm),
                "N_g_fold_equals_g": coxeter,
                "folded_level_k_over_N": level_ok,
                "cd2_gamma_form": cd2,
                "lambda_independent": cd3,
                # the (c, D) rewriting holds for untwisted orbit algebras only
                "cd2_cD_form": cd_form,
                "levels": per_level,
                "ok": coxeter and level_ok and cd2 and cd3,
            }
        )
    return {"name": "affine relations", "fixtures": rows, "ok": all(r["ok"] for r in rows)}


@_timed
def criterion_6(tol: float = UNITARY_TOL):
    """Kac-Peterson S and T for A_1^(1) levels 1..4 and A_2^(1) levels 1..2."""
    rows = []
    for name, levels in (("A1aff", range(1, 5)), ("A2aff", range(1, 3))):
        cm = preset(name)
        for k in levels:
            md = kac_peterson(AffineWeightSet(cm, k))
            rep = modular_checks(md, tol)
            rows.append({"algebra": name, "level": k, **_tolerance_flags(rep, tol)})
    md = kac_peterson(AffineWeightSet(preset("A1aff"), 1))
    ising = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    dev = float(np.max(np.abs(md.S - ising)))
    return {
        "name": "modular data",
        "fixtures": rows,
        "A1_level1_deviation": dev,
        "ok": all(r["ok"] for r in rows) and dev < 1e-12,
    }


def _tolerance_flags(rep: dict, tol: float) -> dict:
    """Mark failures that disappear at the default tolerance as tolerance-induced."""
    out = dict(rep)
    if not rep["ok"] and tol < UNITARY_TOL:
        out["tolerance_induced"] = rep["s2_is_permutation"] and all(v < UNITARY_TOL for v in rep["residuals"].values())
    return out


@_timed
def criterion_7(q_order: int = 6, tol: float = VERLINDE_TOL):
    """(A_1; 1, 1): three fields with the Ising spectrum and fusion."""
    res = solve_coset("A1", 1, 1, q_order)
    cc = res.spec.central_charge
    weights = sorted(f.leading_exponent + cc / 24 for f in res.fields)
    ver = verlinde_check(res.modular, 0, tol)
    names = {f.leading_exponent + cc / 24: i for i, f in enumerate(res.fields)}
    one, eps, sigma = names.get(Fraction(0)), names.get(Fraction(1, 2)), names.get(Fraction(1, 16))
    fusion_ok = False
    if None not in (one, eps, sigma):
        F = ver["fusion"]
        fusion_ok = F[sigma][sigma] == [1 if m in (one, eps) else 0 for m in range(3)]
    return {
        "name": "coset without fixed points",
        "central_charge": str(cc),
        "fields": len(res.fields),
        "conformal_weights": [str(w) for w in weights],
        "characters": [f.character.to_json() for f in res.fields],
        "verlinde": {k: v for k, v in ver.items() if k != "fusion"},
        "sigma_sigma": fusion_ok,
        "ok": len(res.fields) == 3 and weights == [0, Fraction(1, 16), Fraction(1, 2)] and ver["ok"] and fusion_ok,
    }


@_timed
def criterion_8(q_order: int = 6, tol: float = UNITARY_TOL, vtol: float = VERLINDE_TOL):
    """(A_1; 2, 2): Z_2 fixed point, resolution and resolved modular data."""
    res = solve_coset("A1", 2, 2, q_order)
    fp = (tuple(map(Fraction, (1, 1))), tuple(map(Fraction, (1, 1))), tuple(map(Fraction, (2, 2))))
    orbit = next(o for o in res.orbits if fp in o.members)
    stab_ok = len(orbit.stabilizer) == 2
    tw = res.twining[(orbit.representative, next(g for g in orbit.stabilizer if not res.group.elements[g].is_identity()))]
    single = sum(1 for c in tw.coeffs if c != 0) == 1
    mine = [f for f in res.fields if f.orbit is orbit]
    b = res.branching[orbit.representative]
    total = mine[0].character
    for f in mine[1:]:
        total = total + f.character
    sums = total == b
    nonneg = all(isinstance(c, int) and c >= 0 for f in mine for c in f.character.coeffs)
    mod = modular_checks(res.modular, tol)
    prime = prime_case_check(res.spec, res.orbits, res.modular, res.group, tol=tol)
    ver = verlinde_check(res.modular, 0, vtol)
    return {
        "name": "coset with fixed point",
        "central_charge": str(res.spec.central_charge),
        "fields": len(res.fields),
        "fixed_point": [[str(x) for x in lab] for lab in orbit.representative],
        "stabilizer_order": len(orbit.stabilizer),
        "twining_branching": tw.to_json(),
        "resolved_characters": [f.character.to_json() for f in mine],
        "sum_is_branching": sums,
        "nonnegative_integers": nonneg,
        "modular": _tolerance_flags(mod, tol),
        "prime_case": prime,
        "verlinde": {k: v for k, v in ver.items() if k != "fusion"},
        "vacuum_count": vacuum_count(res.spec, res.fields),
        "orbit_constant": orbit_constancy(res.spec, res.orbits, 3, getattr(res, "_engine", None)),
        "ok": stab_ok and single and sums and nonneg and mod["ok"] and prime["ok"] and ver["ok"],
    }


@_timed
def criterion_9():
    """Support, majorization and w_hat-orbit constancy of the twining tables."""
    rows = []
    for r in _theorem_tables():
        oracle, ordinary, fr = r["_tables"]
        rep = property_report(oracle, ordinary, fr)
        rows.append({"algebra": r["algebra"], "verma": r.get("verma", False), **rep})
    return {"name": "twining table properties", "fixtures": rows, "ok": all(r["ok"] for r in rows)}


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def run_all(tolerance: float | None = None) -> list[dict]:
    out = []
    for i, fn in enumerate(CRITERIA, 1):
        if tolerance is not None and fn in (criterion_6, criterion_8):
            rep = fn(tol=tolerance)
        else:
            rep = fn()
        rep["criterion"] = i
        out.append(rep)
    return out


def summary_line(rep: dict) -> str:
    status = "PASS" if rep["ok"] else "FAIL"
    extra = f" [{rep['error']}]" if "error" in rep else ""
    return f"criterion {rep['criterion']}: {status} ({rep['seconds']:.2f}s) {rep['name']}{extra}"
