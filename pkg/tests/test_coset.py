from fractions import Fraction

import numpy as np
import pytest

from orbitfold.coset import (
    BranchingEngine,
    branching_functions,
    build_coset,
    identification_group,
    orbit_constancy,
    prime_case_check,
    resolve,
    selection_and_orbits,
    solve_coset,
    twining_branching,
    vacuum_count,
    verlinde_check,
)
from orbitfold.affine import modular_checks
from orbitfold.errors import NotFixedPoint, UnsupportedAlgebra


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def rocha_caridi(p, pp, r, s, order):
    """Virasoro minimal model character coefficients above q^{h - c/24}."""
    def h(x):
        return Fraction(x * x - (p - pp) ** 2, 4 * p * pp)

    h0 = h(p * r - pp * s)
    num = [0] * order
    for k in range(-10, 11):
        for sign, x in ((1, 2 * p * pp * k + p * r - pp * s), (-1, 2 * p * pp * k + p * r + pp * s)):
            e = h(x) - h0
            if e.denominator == 1 and 0 <= e < order:
                num[int(e)] += sign
    # divide by prod (1 - q^n)
    part = [1] + [0] * (order - 1)
    for n in range(1, order):
        for m in range(n, order):
            part[m] += part[m - n]
    return [sum(num[j] * part[d - j] for j in range(d + 1)) for d in range(order)], h0


@pytest.fixture(scope="module")
def ising():
    return solve_coset("A1", 1, 1, 6)


@pytest.fixture(scope="module")
def orbifold():
    return solve_coset("A1", 2, 2, 6)


def test_central_charges():
    assert build_coset("A1", 1, 1).central_charge == Fraction(1, 2)
    assert build_coset("A1", 2, 2).central_charge == 1
    with pytest.raises(UnsupportedAlgebra):
        build_coset("A1", 1, 0)
    with pytest.raises(UnsupportedAlgebra):
        build_coset("A1aff", 1, 1)


def test_identification_groups():
    assert len(identification_group(build_coset("A1", 1, 2))) == 2
    g = identification_group(build_coset("A2", 1, 1))
    assert len(g) == 3 and any(e.is_identity() for e in g.elements)


def test_ising_branching_functions():
    spec = build_coset("A1", 1, 1)
    bf = branching_functions(spec, 4)
    assert list(bf[(F(1, 0), F(1, 0), F(2, 0))].coeffs) == [1, 0, 1, 1]
    assert bf[(F(1, 0), F(1, 0), F(1, 1))].is_zero()  # selection rule


def test_grade_zero_is_tensor_multiplicity():
    spec = build_coset("A1", 2, 3)
    bf = branching_functions(spec, 1)
    for (a, b, c), series in bf.items():
        j1, j2, j = int(a[1]), int(b[1]), int(c[1])
        cg = int(abs(j1 - j2) <= j <= j1 + j2 and (j1 + j2 - j) % 2 == 0)
        assert series.coeffs[0] == cg


def test_ising_orbits(ising):
    assert len(ising.orbits) == 3
    assert all(not o.is_fixed_point for o in ising.orbits)
    assert vacuum_count(ising.spec, ising.fields) == 1


def test_ising_characters_match_minimal_model(ising):
    cc = ising.spec.central_charge
    by_weight = {f.leading_exponent + cc / 24: f for f in ising.fields}
    for s in (1, 2, 3):
        coeffs, h = rocha_caridi(4, 3, 1, s, 6)
        f = by_weight[h]
        assert list(f.character.normalized().coeffs) == coeffs[: f.character.normalized().order]


def test_ising_fusion(ising):
    ver = verlinde_check(ising.modular)
    assert ver["ok"]
    cc = ising.spec.central_charge
    idx = {f.leading_exponent + cc / 24: i for i, f in enumerate(ising.fields)}
    one, eps, sig = idx[0], idx[Fraction(1, 2)], idx[Fraction(1, 16)]
    N = ver["fusion"]
    assert N[sig][sig][one] == 1 and N[sig][sig][eps] == 1 and N[sig][sig][sig] == 0
    assert N[eps][eps][one] == 1
    assert all(N[0][j][k] == int(j == k) for j in range(3) for k in range(3))


def test_fixed_point_structure(orbifold):
    fixed = [o for o in orbifold.orbits if o.is_fixed_point]
    assert len(fixed) == 1
    assert fixed[0].representative == (F(1, 1), F(1, 1), F(2, 2))
    assert fixed[0].members == [fixed[0].representative]
    assert not orbifold.orbits[0].is_fixed_point  # vacuum orbit free


def test_twining_branching_single_term(orbifold):
    spec = orbifold.spec
    fp = (F(1, 1), F(1, 1), F(2, 2))
    J = orbifold.group.elements[1]
    tw = twining_branching(spec, fp, J, 6)
    assert tw.leading == 0 and tw.coeffs == (1, 0, 0, 0, 0, 0)
    ident = orbifold.group.elements[0]
    assert twining_branching(spec, fp, ident, 6) == orbifold.branching[fp]
    with pytest.raises(NotFixedPoint):
        twining_branching(spec, (F(2, 0), F(2, 0), F(4, 0)), J, 6)


def test_resolution(orbifold):
    fp = (F(1, 1), F(1, 1), F(2, 2))
    mine = [f for f in orbifold.fields if f.orbit.representative == fp]
    b = orbifold.branching[fp]
    assert len(mine) == 2
    assert mine[0].character + mine[1].character == b
    assert all(c >= 0 for f in mine for c in f.character.coeffs)


def test_c1_orbifold_spectrum(orbifold):
    # c = 1 orbifold at N = 6: 1, j, two h = N/4 fields, k^2/4N (k = 1..5), two twist fields each at 1/16, 9/16
    cc = orbifold.spec.central_charge
    got = sorted(f.leading_exponent + cc / 24 for f in orbifold.fields)
    expect = sorted(
        [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(3, 2)]
        + [Fraction(k * k, 24) for k in range(1, 6)]
        + [Fraction(1, 16)] * 2
        + [Fraction(9, 16)] * 2
    )
    assert got == expect


def test_resolved_modular(orbifold):
    rep = modular_checks(orbifold.modular)
    assert rep["ok"], rep
    assert prime_case_check(orbifold.spec, orbifold.orbits, orbifold.modular, orbifold.group)["ok"]
    ver = verlinde_check(orbifold.modular)
    assert ver["ok"]
    assert np.allclose(orbifold.modular.S, orbifold.modular.S.T)


def test_orbit_constancy(orbifold):
    assert orbit_constancy(orbifold.spec, orbifold.orbits, 3)


def test_a2_coset():
    res = solve_coset("A2", 1, 1, 4)
    # W_3 minimal model at c = 4/5: six fields after identification
    assert res.spec.central_charge == Fraction(4, 5)
    assert len(res.fields) == 6
    assert modular_checks(res.modular)["ok"] and verlinde_check(res.modular)["ok"]
