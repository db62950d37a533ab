from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orbitfold.cartan import WeightCoords
from orbitfold.catalog import preset
from orbitfold.errors import StepBudgetExceeded
from orbitfold.weyl import (
    apply_word,
    coxeter_relation_check,
    finite_weyl_orbit,
    hat_generator,
    hat_reflection,
    hat_reflection_formula,
    longest_word,
    reflect,
    to_dominant,
)

frac = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 6))


def test_reflections():
    a2 = preset("A2")
    assert reflect(a2, WeightCoords.of([1, 1]), 0).labels == (-1, 2)
    a1 = preset("A1")
    assert reflect(a1, WeightCoords.of([2]), 0).labels == (-2,)
    rho = a2.rho()
    assert reflect(a2, rho, 1) == rho - a2.simple_root(1)


def test_hat_a2_flip(folds):
    fr = folds["A2_flip"]
    assert hat_generator(fr, 0).letters in ((0, 1, 0), (1, 0, 1))
    assert hat_reflection(fr, WeightCoords.of([1, 1]), 0).labels == (-1, -1)


def test_hat_singleton_is_simple(folds):
    fr = folds["A3_flip"]
    k = next(i for i, o in enumerate(fr.orbit_data.orbits) if len(o) == 1)
    assert hat_generator(fr, k).letters == tuple(fr.orbit_data.orbits[k])


def test_formula_agrees_on_symmetric(folds):
    fr = folds["A2_flip"]
    for x in range(-3, 4):
        lam = WeightCoords.of([x, x])
        assert hat_reflection_formula(fr, lam, 0) == hat_reflection(fr, lam, 0)
    # off the symmetric locus the s=2 closed form is not a Weyl group element
    lam = WeightCoords.of([1, 0])
    assert hat_reflection_formula(fr, lam, 0) != hat_reflection(fr, lam, 0)


@pytest.mark.parametrize("key,m", [("A3_flip", 4), ("D4_cycle", 6)])
def test_coxeter_exponents(folds, key, m):
    fr = folds[key]
    samples = [WeightCoords.of([Fraction(i + j, 3) for j in range(fr.source.n)]) for i in range(10)]
    rep = coxeter_relation_check(fr, samples)
    assert rep["ok"]
    assert [0, 1, m] in rep["checked"]


def test_to_dominant():
    a2 = preset("A2")
    lam, word = to_dominant(a2, WeightCoords.of([-1, 2]))
    assert lam.labels == (1, 1) and word.letters == (0,)
    a1 = preset("A1")
    lam, word = to_dominant(a1, WeightCoords.of([-2]))
    assert lam.labels == (2,) and word.sign == -1
    lam, word = to_dominant(a2, WeightCoords.of([2, 3]))
    assert word.letters == ()


def test_to_dominant_budget():
    cm = preset("A1aff")
    with pytest.raises(StepBudgetExceeded):
        to_dominant(cm, WeightCoords.of([-50, 1]), budget=3)


def test_longest_word_lengths():
    assert len(longest_word(preset("A3")).letters) == 6
    assert len(longest_word(preset("G2")).letters) == 6
    assert len(finite_weyl_orbit(preset("B2"), preset("B2").rho())) == 8


@settings(max_examples=60)
@given(st.lists(frac, min_size=4, max_size=4), frac)
def test_hat_involution_commutation_affine(labels, grade):
    from orbitfold.catalog import preset as p
    from orbitfold.fold import fold, validate_automorphism

    cm = p("A3aff")
    aut = validate_automorphism(cm, (2, 3, 0, 1))
    fr = fold(cm, aut)
    lam = WeightCoords(tuple(labels), grade)
    for k in range(fr.folded.n):
        w = hat_generator(fr, k)
        assert apply_word(cm, w, apply_word(cm, w, lam)) == lam
        assert aut.act_weight(apply_word(cm, w, lam)) == apply_word(cm, w, aut.act_weight(lam))
