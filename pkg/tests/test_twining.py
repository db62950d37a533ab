from fractions import Fraction

import pytest

from orbitfold.cartan import WeightCoords
from orbitfold.catalog import preset
from orbitfold.cyclotomic import Cyclotomic
from orbitfold.errors import DepthBudgetExceeded, NotRotation, NotSymmetricWeight
from orbitfold.fold import validate_automorphism
from orbitfold.twining import (
    build_oracle_module,
    compare_tables,
    eigenvalue_split,
    oracle_checks,
    ordinary_table,
    property_report,
    twining_character_oracle,
    twining_character_via_orbit,
    twining_rotation_special_case,
)


def _a2_flip():
    cm = preset("A2")
    return cm, validate_automorphism(cm, (1, 0))


def test_a2_adjoint_ranks():
    cm, aut = _a2_flip()
    mod = build_oracle_module(cm, aut, [1, 1], 4)
    assert sum(mod.quotient_rank(n) for n in mod.tau) == 8
    assert mod.quotient_rank((1, 1)) == 2


def test_a2_oracle_entries():
    cm, aut = _a2_flip()
    tab = twining_character_oracle(build_oracle_module(cm, aut, [1, 1], 4))
    assert tab[(0, 0)] == 1
    assert tab[(1, 1)] == 0  # trace of the swap on the Cartan subalgebra
    assert tab[(2, 2)] == 1
    assert all(v.is_zero() for n, v in tab.entries.items() if n[0] != n[1])


def test_a2_via_orbit(folds):
    tab = twining_character_via_orbit(folds["A2_flip"], [1, 1], 4)
    assert {n: v for n, v in tab.entries.items() if not v.is_zero()} == {(0, 0): 1, (2, 2): 1}


def test_identity_automorphism_gives_ordinary_character():
    cm = preset("A2")
    ident = validate_automorphism(cm, (0, 1))
    mod = build_oracle_module(cm, ident, [1, 1], 4)
    tab = twining_character_oracle(mod)
    ordinary = ordinary_table(cm, [1, 1], 4)
    assert all(tab[n] == ordinary[n] for n in ordinary.entries)


def test_trivial_highest_weight(folds):
    tab = twining_character_via_orbit(folds["A3_flip"], [0, 0, 0], 4)
    assert {n: v for n, v in tab.entries.items() if not v.is_zero()} == {(0, 0, 0): 1}


@pytest.mark.parametrize("verma", [False, True])
def test_a3_flip_theorem(folds, verma):
    cm = preset("A3")
    aut = validate_automorphism(cm, (2, 1, 0))
    mod = build_oracle_module(cm, aut, [1, 0, 1], 4, verma=verma)
    assert oracle_checks(mod)["ok"]
    orbit = twining_character_via_orbit(folds["A3_flip"], mod.highest_weight, 4, verma=verma)
    assert compare_tables(twining_character_oracle(mod), orbit) == []


def test_a3_affine_tau_squares_to_one():
    cm = preset("A3aff")
    aut = validate_automorphism(cm, (2, 3, 0, 1))
    mod = build_oracle_module(cm, aut, [1, 0, 1, 0], 4)
    assert oracle_checks(mod)["tau_order"]


def test_eigenvalue_split():
    cm, aut = _a2_flip()
    mod = build_oracle_module(cm, aut, [1, 1], 4)
    split = eigenvalue_split(mod, (1, 1))
    assert split == {0: 1, 1: 1}


def test_properties(folds):
    fr = folds["D4_cycle"]
    tw = twining_character_via_orbit(fr, [0, 1, 0, 0], 10)
    rep = property_report(tw, ordinary_table(fr.source, [0, 1, 0, 0], 10), fr)
    assert rep["ok"] and rep["hat_pairs_checked"] > 0


def test_depth_budget():
    cm = preset("A3aff")
    aut = validate_automorphism(cm, (2, 3, 0, 1))
    with pytest.raises(DepthBudgetExceeded):
        build_oracle_module(cm, aut, [1, 0, 1, 0], 9)


def test_not_symmetric():
    cm, aut = _a2_flip()
    with pytest.raises(NotSymmetricWeight):
        build_oracle_module(cm, aut, [1, 0], 2)


def test_rotation_special_case():
    cm = preset("A1aff")
    aut = validate_automorphism(cm, (1, 0))
    s = twining_rotation_special_case(cm, aut, [1, 1], 5)
    assert s.leading == Fraction(3, 16)
    assert s.coeffs[0] == 1 and all(c == 0 for c in s.coeffs[1:])
    phased = twining_rotation_special_case(cm, aut, [1, 1], 2, t=Fraction(1, 8))
    assert phased.coeffs[0] == Cyclotomic.zeta(4)
    with pytest.raises(NotRotation):
        twining_rotation_special_case(preset("A3aff"), validate_automorphism(preset("A3aff"), (2, 3, 0, 1)), [1, 0, 1, 0], 3)
