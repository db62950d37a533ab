from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbitfold.cartan import WeightCoords
from orbitfold.catalog import preset
from orbitfold.errors import LinkingConditionViolated, NotAutomorphism, NotInvariant, NotSymmetricWeight
from orbitfold.fold import (
    check_norm_relation,
    compose,
    fold,
    folded_level,
    lift_weight,
    orbit_data,
    project_cartan_element,
    project_weight,
    validate_automorphism,
)


def test_automorphisms():
    assert validate_automorphism(preset("A3"), (2, 1, 0)).order == 2
    assert validate_automorphism(preset("A2"), (1, 0)).order == 2
    with pytest.raises(NotAutomorphism):
        validate_automorphism(preset("A3"), (1, 0, 2))


def test_orbit_data():
    cm = preset("A3")
    od = orbit_data(cm, validate_automorphism(cm, (2, 1, 0)))
    assert sorted(map(sorted, od.orbits)) == [[0, 2], [1]]
    assert od.linking_ok
    cm = preset("A2")
    od = orbit_data(cm, validate_automorphism(cm, (1, 0)))
    assert od.weights == (2,) and od.lengths == (2,)
    cm = preset("A2aff")
    od = orbit_data(cm, validate_automorphism(cm, (1, 2, 0)))
    assert od.weights == (3,) and not od.linking_ok


@pytest.mark.parametrize(
    "key,expected",
    [
        ("A3_flip", [[2, -2], [-1, 2]]),
        ("D4_cycle", [[2, -3], [-1, 2]]),
        ("A2_flip", [[2]]),
        ("A3aff_half", [[2, -2], [-2, 2]]),
        ("C4aff_current", [[2, -2, 0], [-1, 2, -2], [0, -1, 2]]),
    ],
)
def test_fold_fixtures(folds, key, expected):
    assert folds[key].folded.as_lists() == expected


def test_b3_current_gives_same_twisted_matrix():
    cm = preset("B3aff")
    fr = fold(cm, validate_automorphism(cm, (1, 0, 2, 3)))
    assert fr.folded.as_lists() == [[2, -2, 0], [-1, 2, -2], [0, -1, 2]]


def test_linking_violation():
    cm = preset("A1aff")
    with pytest.raises(LinkingConditionViolated):
        fold(cm, validate_automorphism(cm, (1, 0)))


def test_project_cartan_element(folds):
    od = folds["A3_flip"].orbit_data
    got = dict(zip(map(tuple, od.orbits), project_cartan_element(od, (1, 0, 1))))
    assert got[(0, 2)] == 2 and got[(1,)] == 0
    with pytest.raises(NotInvariant):
        project_cartan_element(od, (1, 0, 0))


def test_project_lift(folds):
    fr = folds["A2_flip"]
    lam = WeightCoords.of([1, 1])
    small = project_weight(fr, lam)
    assert small.labels == (1,)
    assert lift_weight(fr, small) == lam
    with pytest.raises(NotSymmetricWeight):
        project_weight(fr, WeightCoords.of([1, 0]))
    zero = WeightCoords.of([0, 0])
    assert project_weight(fr, zero).labels == (0,)


def test_folded_level(folds):
    fr = folds["A3aff_half"]
    for lam in ([1, 0, 1, 0], [0, 1, 0, 1], [2, 0, 2, 0]):
        w = WeightCoords.of(lam)
        assert folded_level(fr, w) == fr.source.level(w) / 2


def test_norm_relation(folds):
    import random

    rng = random.Random(3)
    for key in ("A3_flip", "A2_flip", "D4_cycle"):
        od = folds[key].orbit_data
        for _ in range(20):
            vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in od.orbits]
            vals2 = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in od.orbits]
            h1 = [0] * od.n
            h2 = [0] * od.n
            for v, v2, orb in zip(vals, vals2, od.orbits):
                for i in orb:
                    h1[i], h2[i] = v, v2
            assert check_norm_relation(folds[key], h1, h2)


def test_lift_is_isometry_up_to_n(folds):
    fr = folds["C4aff_current"]
    f, g = fr.folded, fr.source
    for a in range(f.n):
        for b in range(f.n):
            x, y = f.fundamental_weight(a), f.fundamental_weight(b)
            assert g.inner(lift_weight(fr, x), lift_weight(fr, y)) == fr.N * f.inner(x, y)


def test_compose_powers():
    cm = preset("A3aff")
    r = validate_automorphism(cm, (1, 2, 3, 0))
    assert compose(r, r).perm == (2, 3, 0, 1)
    assert compose(compose(r, r), compose(r, r)).is_identity()


@given(st.lists(st.integers(-6, 6), min_size=4, max_size=4), st.integers(-6, 6))
def test_affine_dual_action_isometric(labels, grade):
    cm = preset("A3aff")
    aut = validate_automorphism(cm, (1, 2, 3, 0))
    lam = WeightCoords.of(labels, grade)
    mu = WeightCoords.of(labels[::-1], -grade)
    assert cm.inner(aut.act_weight(lam), aut.act_weight(mu)) == cm.inner(lam, mu)
