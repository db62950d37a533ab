from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orbitfold.cyclotomic import Cyclotomic
from orbitfold.qseries import QSeries

small = st.integers(-5, 5)
elems = st.builds(lambda n, cs: Cyclotomic(n, cs), st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12]), st.lists(small, min_size=1, max_size=6))


def test_roots_of_unity():
    z = Cyclotomic.zeta(5)
    assert z**5 == 1
    assert sum((z**k for k in range(1, 5)), Cyclotomic(1, [0])) == -1
    assert Cyclotomic.zeta(4, 1) ** 2 == -1
    # zeta_6 lives in Q(zeta_3) as well
    assert Cyclotomic.zeta(6) == -(Cyclotomic.zeta(3, 2))


def test_rational_and_complex():
    x = Cyclotomic.rational(Fraction(3, 4), 7)
    assert x.is_rational() and x.to_rational() == Fraction(3, 4)
    z = Cyclotomic.zeta(8)
    assert abs(complex(z) - complex(2**-0.5, 2**-0.5)) < 1e-12
    assert abs(z) == pytest.approx(1.0)


def test_inverse_and_galois():
    a = Cyclotomic(5, [1, 2, 0, 1])
    assert a * a.inverse() == 1
    assert a.galois(2).galois(3) == a
    assert abs(complex(a * a.conjugate()).imag) < 1e-12


@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()
    if not b.is_zero():
        assert (a / b) * b == a


@given(elems)
def test_hash_consistent(a):
    b = a + 0
    assert a == b and hash(a) == hash(b)


def test_qseries_basic():
    a = QSeries.make(Fraction(1, 2), [1, 1, 0, 1], 4)
    b = QSeries.make(Fraction(3, 2), [2, 0, 1], 3)
    s = a + b
    assert s.leading == Fraction(1, 2) and s.order == 4 and s.coeffs == (1, 3, 0, 2)
    p = QSeries.make(0, [1, 1], 4) * QSeries.make(0, [1, -1], 4)
    assert p.coeffs == (1, 0, -1, 0)
    assert QSeries.make(0, [0, 0, 3], 5).normalized().leading == 2
    with pytest.raises(ValueError):
        a.truncate(10)
    with pytest.raises(IndexError):
        a[4]


@given(st.lists(small, min_size=5, max_size=5), st.lists(small, min_size=5, max_size=5), st.lists(small, min_size=5, max_size=5))
def test_qseries_ring(x, y, z):
    a, b, c = (QSeries.make(0, v, 5) for v in (x, y, z))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_qseries_json():
    js = QSeries.make(Fraction(-1, 24), [1, Cyclotomic.zeta(3)], 2).to_json()
    assert js["leading_exponent"] == "-1/24" and js["truncation_order"] == 2
    assert js["coefficients"][0] == 1
