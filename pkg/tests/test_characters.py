from fractions import Fraction

import pytest

from orbitfold.cartan import WeightCoords
from orbitfold.catalog import preset
from orbitfold.characters import (
    irreducible_multiplicities,
    root_multiplicities,
    verma_multiplicities,
    virasoro_specialize,
    weyl_dimension,
)
from orbitfold.errors import DepthInsufficient, NotDominantIntegral


def _partitions(n):
    p = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            p[m] += p[m - k]
    return p


def test_root_multiplicities_a2():
    roots = root_multiplicities(preset("A2"), 3)
    assert roots == {(1, 0): 1, (0, 1): 1, (1, 1): 1}


@pytest.mark.parametrize("name,mult", [("A1aff", 1), ("A2aff", 2), ("A3aff", 3), ("C2aff", 2)])
def test_imaginary_root_multiplicity(name, mult):
    cm = preset(name)
    delta = tuple(int(a) for a in cm.kac)
    roots = root_multiplicities(cm, sum(delta))
    assert roots[delta] == mult


def test_depth_one_simple_roots():
    assert root_multiplicities(preset("G2"), 1) == {(1, 0): 1, (0, 1): 1}


def test_sl2_string():
    tab = irreducible_multiplicities(preset("A1"), [2])
    assert sorted((tab.weight(n).labels[0], m) for n, m in tab.items()) == [(-2, 1), (0, 1), (2, 1)]


def test_a2_adjoint():
    tab = irreducible_multiplicities(preset("A2"), [1, 1])
    assert tab.total() == 8
    assert tab[(1, 1)] == 2


def test_trivial_module():
    tab = irreducible_multiplicities(preset("B2"), [0, 0])
    assert dict(tab.items()) == {(0, 0): 1}


@pytest.mark.parametrize(
    "name,hw", [("G2", [1, 1]), ("D4", [0, 1, 0, 0]), ("B3", [1, 0, 1]), ("C3", [0, 1, 1]), ("A3", [2, 0, 1])]
)
def test_total_matches_weyl_dimension(name, hw):
    cm = preset(name)
    assert irreducible_multiplicities(cm, hw).total() == weyl_dimension(cm, hw)


def test_not_dominant():
    with pytest.raises(NotDominantIntegral):
        irreducible_multiplicities(preset("A2"), [1, -1])


def test_verma():
    a1 = verma_multiplicities(preset("A1"), WeightCoords.of([Fraction(1, 3)]), depth=5)
    assert set(dict(a1.items()).values()) == {1}
    a2 = verma_multiplicities(preset("A2"), WeightCoords.of([1, 1]), depth=2)
    assert a2[(1, 1)] == 2
    assert dict(verma_multiplicities(preset("A2"), WeightCoords.of([0, 0]), depth=0).items()) == {(0, 0): 1}


def test_a1_affine_level_one_vacuum():
    # Frenkel-Kac: sum_m q^{m^2} / prod (1 - q^n)
    order = 9
    p = _partitions(order)
    theta = [0] * order
    for m in range(-4, 5):
        if m * m < order:
            theta[m * m] += 1
    expect = [sum(theta[j] * p[d - j] for j in range(d + 1)) for d in range(order)]
    tab = irreducible_multiplicities(preset("A1aff"), [1, 0], max_grade=order - 1)
    series = virasoro_specialize(tab, order, 0, 1)
    assert list(series.coeffs) == expect == [1, 3, 4, 7, 13, 19, 29, 43, 62]
    assert series.leading == Fraction(-1, 24)


def test_virasoro_depth_insufficient():
    tab = irreducible_multiplicities(preset("A1aff"), [1, 0], max_grade=2)
    with pytest.raises(DepthInsufficient):
        virasoro_specialize(tab, 6)


def test_verma_affine_grades_are_partition_counts():
    # A_1^(1) Verma module: prod over positive roots; grade dims = coefficient of
    # prod_n (1-q^n)^{-3} times the horizontal string sum, check grade 0 and 1
    cm = preset("A1aff")
    tab = verma_multiplicities(cm, WeightCoords.of([Fraction(1, 7), Fraction(2, 7)]), depth=12, max_grade=1)
    by = tab.by_grade()
    # grade 0: f_1^k for k <= depth; grade 1 contributions start at f_0
    assert by[Fraction(0)] == 13
