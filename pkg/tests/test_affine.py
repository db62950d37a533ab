import math
from fractions import Fraction

import numpy as np
import pytest

from orbitfold.affine import (
    AffineWeightSet,
    check_cd2,
    gamma00,
    kac_peterson,
    level_weights,
    modular_checks,
    monodromy_charge,
    simple_currents,
)
from orbitfold.cartan import WeightCoords
from orbitfold.catalog import preset
from orbitfold.errors import WeightNotAtLevel
from orbitfold.fold import fold, is_symmetric, validate_automorphism


def test_conformal_weights():
    ws = AffineWeightSet(preset("A1aff"), 2)
    assert ws.conformal_weight([1, 1]) == Fraction(3, 16)
    assert ws.conformal_weight([2, 0]) == 0
    assert AffineWeightSet(preset("A1aff"), 4).conformal_weight([2, 2]) == Fraction(1, 3)
    with pytest.raises(WeightNotAtLevel):
        ws.conformal_weight([1, 0])


def test_anomalies():
    ws = AffineWeightSet(preset("A1aff"), 1)
    assert ws.central_charge == 1 and ws.modular_anomaly([1, 0]) == Fraction(-1, 24)
    ws = AffineWeightSet(preset("A1aff"), 2)
    assert ws.central_charge == Fraction(3, 2)
    assert ws.modular_anomaly([1, 1]) == Fraction(1, 8)


def test_level_weight_count():
    for k in range(1, 6):
        assert len(level_weights(preset("A1aff"), k)) == k + 1
        assert len(level_weights(preset("A2aff"), k)) == (k + 1) * (k + 2) // 2
    assert level_weights(preset("A1aff"), 3)[0].labels == (3, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_a1_s_matrix_closed_form(k):
    md = kac_peterson(AffineWeightSet(preset("A1aff"), k))
    # weights (k - j, j) in order j = 0, 1, ..., k
    expect = np.array(
        [[math.sqrt(2 / (k + 2)) * math.sin(math.pi * (a + 1) * (b + 1) / (k + 2)) for b in range(k + 1)] for a in range(k + 1)]
    )
    assert np.max(np.abs(md.S - expect)) < 1e-12


def test_a1_level2_middle_entry():
    md = kac_peterson(AffineWeightSet(preset("A1aff"), 2))
    assert abs(md.S[1, 1]) < 1e-12


@pytest.mark.parametrize("name,k", [("A1aff", 3), ("A2aff", 2), ("C2aff", 2), ("G2aff", 2), ("B3aff", 1), ("D4aff", 1), ("A3aff", 2)])
def test_modular_checks(name, k):
    rep = modular_checks(kac_peterson(AffineWeightSet(preset(name), k)))
    assert rep["ok"], rep
    assert rep["residuals"]["unitarity"] < 1e-12


def test_simple_currents():
    cur = simple_currents(preset("A1aff"))
    assert len(cur) == 2 and cur[0].automorphism.is_identity()
    assert cur[1].act(WeightCoords.of([3, 1])).labels == (1, 3)
    ws = AffineWeightSet(preset("A1aff"), 2)
    assert ws.conformal_weight(cur[1].weight(2)) == Fraction(1, 2)
    assert len(simple_currents(preset("A2aff"))) == 3
    assert len(simple_currents(preset("D4aff"))) == 4
    assert len(simple_currents(preset("E6aff"))) == 3


def test_monodromy():
    ws = AffineWeightSet(preset("A1aff"), 2)
    J = simple_currents(preset("A1aff"))[1]
    assert monodromy_charge(ws, J, [1, 1]) == Fraction(1, 2)
    assert monodromy_charge(ws, J, [2, 0]) == 0


def test_cd2_identity_collapses():
    cm = preset("A2aff")
    fr = fold(cm, validate_automorphism(cm, (0, 1, 2)))
    assert gamma00(cm, fr.automorphism) == 0
    rep = check_cd2(fr, [1, 1, 1])
    assert rep["equal"] and rep["lhs"] == Fraction(rep["delta_folded"])


def test_cd2_a3_half_rotation(folds):
    fr = folds["A3aff_half"]
    ws = AffineWeightSet(fr.source, 2)
    reps = [check_cd2(fr, w) for w in ws.weights if is_symmetric(fr.orbit_data, w.labels)]
    assert len(reps) == 2 and all(r["equal"] and r["equal_cD"] for r in reps)
    assert {r["constant"] for r in reps} == {"5/12"}
    assert fr.N * fr.folded.dual_coxeter == fr.source.dual_coxeter


def test_cd2_twisted_fold_gamma_form(folds):
    fr = folds["C4aff_current"]
    ws = AffineWeightSet(fr.source, 4)
    reps = [check_cd2(fr, w) for w in ws.weights if is_symmetric(fr.orbit_data, w.labels)]
    assert all(r["equal"] for r in reps)
    assert len({r["lhs"] - Fraction(r["delta_folded"]) for r in reps}) == 1
