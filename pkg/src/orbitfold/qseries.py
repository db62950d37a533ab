"""Truncated q-series  q^leading * sum_{m < order} c_m q^m.

Coefficients may be ints, Fractions or :class:`Cyclotomic` elements.
Arithmetic keeps the smallest truncation of its operands; nothing is ever
silently extended.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import Cyclotomic


def _json_coeff(c):
    if isinstance(c, Cyclotomic):
        if c.is_rational():
            return _json_coeff(c.to_rational())
        return c.to_json()
    if isinstance(c, Fraction) and c.denominator != 1:
        return str(c)
    return int(c)


@dataclass(frozen=True)
class QSeries:
    leading: Fraction
    coeffs: tuple
    order: int

    @classmethod
    def make(cls, leading, coeffs: Sequence, order: int | None = None) -> "QSeries":
        coeffs = list(coeffs)
        order = len(coeffs) if order is None else order
        coeffs = (coeffs + [0] * order)[:order]
        return cls(Fraction(leading), tuple(coeffs), order)

    @classmethod
    def monomial(cls, exponent, order: int, coeff=1) -> "QSeries":
        return cls.make(exponent, [coeff], order)

    def __getitem__(self, m: int):
        if m >= self.order:
            raise IndexError(f"grade {m} beyond truncation order {self.order}")
        return self.coeffs[m]

    def _align(self, other: "QSeries"):
        d = other.leading - self.leading
        if d.denominator != 1:
            raise ValueError("exponents differ by a non-integer")
        d = int(d)
        if d < 0:
            b, a = other._align(self)
            return a, b
        # self starts lower; shift other up by d
        order = min(self.order, other.order + d)
        a = list(self.coeffs[:order])
        b = ([0] * d + list(other.coeffs))[:order]
        return (self.leading, a, order), (self.leading, b, order)

    def __add__(self, other: "QSeries") -> "QSeries":
        (lead, a, order), (_, b, _) = self._align(other)
        return QSeries(lead, tuple(x + y for x, y in zip(a, b)), order)

    def __neg__(self) -> "QSeries":
        return QSeries(self.leading, tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, c) -> "QSeries":
        return QSeries(self.leading, tuple(c * x for x in self.coeffs), self.order)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        order = min(self.order, other.order)
        out = [0] * order
        for i, x in enumerate(self.coeffs[:order]):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs[: order - i]):
                out[i + j] = out[i + j] + x * y
        return QSeries(self.leading + other.leading, tuple(out), order)

    __rmul__ = scale

    def shift(self, e) -> "QSeries":
        return QSeries(self.leading + Fraction(e), self.coeffs, self.order)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.leading, self.coeffs[:order], order)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def normalized(self) -> "QSeries":
        """Move leading zeros into the exponent (keeps the absolute truncation)."""
        k = 0
        while k < self.order and self.coeffs[k] == 0:
            k += 1
        if k == self.order:
            return self
        return QSeries(self.leading + k, self.coeffs[k:], self.order - k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        try:
            (_, a, order), (_, b, _) = self._align(other)
        except ValueError:
            return self.is_zero() and other.is_zero()
        return all(x == y for x, y in zip(a, b))

    def __hash__(self):
        return hash((self.leading, self.order))

    def to_json(self) -> dict:
        return {
            "leading_exponent": str(self.leading),
            "coefficients": [_json_coeff(c) for c in self.coeffs],
            "truncation_order": self.order,
        }
