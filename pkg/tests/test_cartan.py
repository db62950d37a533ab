from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbitfold.cartan import Kind, WeightCoords, classify, dimension_finite, positive_roots_finite, validate_cartan
from orbitfold.catalog import PRESET_NAMES, algebra_from_json, preset
from orbitfold.errors import Disconnected, NotGCM


def test_a2_valid_finite():
    cm = validate_cartan([[2, -1], [-1, 2]])
    assert cm.symmetrizer == (1, 1)
    assert cm.kind is Kind.FINITE


def test_zero_pattern_rejected():
    with pytest.raises(NotGCM):
        validate_cartan([[2, -1], [0, 2]])


def test_bad_diagonal_and_sign():
    with pytest.raises(NotGCM):
        validate_cartan([[1, -1], [-1, 2]])
    with pytest.raises(NotGCM):
        validate_cartan([[2, 1], [1, 2]])


def test_disconnected():
    with pytest.raises(Disconnected):
        validate_cartan([[2, 0], [0, 2]])


def test_affine_a1():
    cm = validate_cartan([[2, -2], [-2, 2]])
    assert cm.symmetrizer == (1, 1)
    assert classify(cm) == (Kind.AFFINE, False)


def test_hyperbolic():
    kind, hyper = classify(validate_cartan([[2, -3], [-3, 2]]))
    assert kind is Kind.INDEFINITE and hyper


def test_inner_products():
    a2 = preset("A2")
    w1 = a2.fundamental_weight(0)
    assert a2.inner(w1, w1) == Fraction(2, 3)
    a1 = preset("A1")
    alpha = a1.simple_root(0)
    assert a1.inner(alpha, alpha) == 2
    zero = WeightCoords.of([0, 0])
    assert a2.inner(a2.rho(), zero) == 0


@pytest.mark.parametrize(
    "name,dim", [("A1", 3), ("A2", 8), ("A3", 15), ("B2", 10), ("C2", 10), ("G2", 14), ("D4", 28), ("E6", 78), ("F4", 52)]
)
def test_dimensions(name, dim):
    assert dimension_finite(preset(name)) == dim


@pytest.mark.parametrize("name,h", [("A1aff", 2), ("A2aff", 3), ("C2aff", 3), ("D4aff", 6), ("E6aff", 12), ("G2aff", 4)])
def test_dual_coxeter(name, h):
    assert preset(name).dual_coxeter == h


def test_presets_classify():
    for name in PRESET_NAMES:
        cm = preset(name)
        assert cm.kind is (Kind.AFFINE if name.endswith("aff") else Kind.FINITE)


def test_json_round_trip():
    for name in ("A3", "C4aff", "G2"):
        cm = preset(name)
        back = algebra_from_json(cm.to_json())
        assert back.as_lists() == cm.as_lists()
        assert back.norms == cm.norms and back.dual_kac == cm.dual_kac


def test_highest_root_count_b2():
    assert len(positive_roots_finite(preset("B2"))) == 4


@given(st.lists(st.builds(Fraction, st.integers(-20, 20), st.integers(1, 5)), min_size=3, max_size=3))
def test_form_symmetric(xs):
    cm = preset("B3")
    a = WeightCoords(tuple(xs))
    b = cm.rho()
    assert cm.inner(a, b) == cm.inner(b, a)
