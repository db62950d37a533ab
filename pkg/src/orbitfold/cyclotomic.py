"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are polynomials in zeta = exp(2 pi i / N) reduced modulo the N-th
cyclotomic polynomial, so equality is decided coefficientwise. Elements of
different conductors are combined in Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint


@lru_cache(maxsize=None)
def _phi(n: int) -> flint.fmpq_poly:
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(n))


def _to_fraction(x) -> Fraction:
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


class Cyclotomic:
    __slots__ = ("conductor", "_poly")

    def __init__(self, conductor: int, coeffs=(0,)):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        if isinstance(coeffs, flint.fmpq_poly):
            poly = coeffs
        else:
            poly = flint.fmpq_poly([flint.fmpq(_to_fraction(c).numerator, _to_fraction(c).denominator) for c in coeffs])
        self._poly = poly % _phi(conductor)

    # ---- constructors ---------------------------------------------------
    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "Cyclotomic":
        k %= n
        return cls(n, [0] * k + [1])

    @classmethod
    def rational(cls, x, conductor: int = 1) -> "Cyclotomic":
        return cls(conductor, [x])

    # ---- basics -----------------------------------------------------------
    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients over 1, zeta, ..., zeta^{phi(N)-1}."""
        deg = _phi(self.conductor).degree()
        cs = [_to_fraction(c) for c in self._poly.coeffs()]
        return tuple(cs + [Fraction(0)] * (deg - len(cs)))

    def _lift(self, n: int) -> flint.fmpq_poly:
        """Same element written in Q(zeta_n), n a multiple of the conductor."""
        step = n // self.conductor
        cs = self._poly.coeffs()
        out = [flint.fmpq(0)] * (step * (len(cs) - 1) + 1) if cs else [flint.fmpq(0)]
        for i, c in enumerate(cs):
            out[i * step] = c
        return flint.fmpq_poly(out)

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic(1, [_to_fraction(other)])
        n = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        return n, self._lift(n), other._lift(n)

    def __add__(self, other):
        n, a, b = self._common(other)
        return Cyclotomic(n, a + b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, -self._poly)

    def __sub__(self, other):
        n, a, b = self._common(other)
        return Cyclotomic(n, a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        n, a, b = self._common(other)
        return Cyclotomic(n, a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            if other.is_rational():
                other = other.to_rational()
            else:
                return self * other.inverse()
        return Cyclotomic(self.conductor, self._poly * flint.fmpq(1) / flint.fmpq(_to_fraction(other).numerator, _to_fraction(other).denominator))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic(self.conductor, [1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s, _t = self._poly.xgcd(_phi(self.conductor))
        # s * p + t * phi = g with g a nonzero constant
        return Cyclotomic(self.conductor, s / g[0])

    def conjugate(self) -> "Cyclotomic":
        n = self.conductor
        cs = self._poly.coeffs()
        out = [flint.fmpq(0)] * n
        for i, c in enumerate(cs):
            out[(-i) % n] += c
        return Cyclotomic(n, flint.fmpq_poly(out))

    def galois(self, k: int) -> "Cyclotomic":
        """Image under zeta -> zeta^k, gcd(k, N) = 1."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise ValueError("Galois exponent must be a unit")
        cs = self._poly.coeffs()
        out = [flint.fmpq(0)] * n
        for i, c in enumerate(cs):
            out[(i * k) % n] += c
        return Cyclotomic(n, flint.fmpq_poly(out))

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coefficients[0] if self.coefficients else Fraction(0)

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum((float(_to_fraction(c)) * z**i for i, c in enumerate(self._poly.coeffs())), 0j)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __eq__(self, other) -> bool:
        try:
            n, a, b = self._common(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (a - b) % _phi(n) == 0

    def __hash__(self) -> int:
        # hash through the smallest field containing the element is costly;
        # rational values hash like Fractions, others by complex value
        if self.is_rational():
            return hash(self.to_rational())
        z = complex(self)
        return hash((round(z.real, 9), round(z.imag, 9)))

    def __repr__(self) -> str:
        return f"Cyclotomic({self.conductor}, {[str(c) for c in self.coefficients]})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_rational())
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mon = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mon:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(terms) + f" (z=e^(2pi i/{self.conductor}))"

    def to_json(self):
        if self.is_rational():
            return str(self.to_rational())
        return {"conductor": self.conductor, "coefficients": [str(c) for c in self.coefficients]}
