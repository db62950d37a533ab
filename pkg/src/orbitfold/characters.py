"""Weight multiplicities of highest weight modules.

Weights below the highest weight are keyed by the nonnegative integer vector
``n`` with ``lambda = Lambda - sum_i n_i alpha_i``. Depth means total height
``sum n_i``; for affine algebras the grade of ``n`` is ``n_z / a_z`` (``z``
the distinguished node), which is the L_0 eigenvalue relative to the highest
weight.

Root multiplicities come from factoring the denominator identity, irreducible
multiplicities from Freudenthal's formula, Verma multiplicities from the
Kostant partition function. All three use only the form on the root lattice,
so they work for finite, affine and indefinite matrices alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .cartan import CartanMatrix, Kind, WeightCoords
from .errors import DepthInsufficient, NotDominantIntegral
from .qseries import QSeries

Vec = tuple[int, ...]


def _height(v: Sequence[int]) -> int:
    return sum(v)


def _unit(n: int, i: int) -> Vec:
    return tuple(int(k == i) for k in range(n))


class _IntForm:
    """(x|y) on the root lattice scaled by a common denominator to integers."""

    def __init__(self, cm: CartanMatrix):
        self.scale = lcm(*(e.denominator for e in cm.norms))
        self.E = [int(e * self.scale) for e in cm.norms]
        n = cm.n
        self.M = [[cm.entries[i][j] * self.E[j] for j in range(n)] for i in range(n)]

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = self.M[i]
                total += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
        return total


def _grade_cap(cm: CartanMatrix, max_grade) -> int | None:
    """Bound on n_z for weights of grade <= max_grade."""
    if max_grade is None:
        return None
    if cm.kind is not Kind.AFFINE:
        raise ValueError("max_grade only makes sense for affine algebras")
    cap = Fraction(max_grade) * cm.kac[cm.zero_node]
    return int(cap)  # floor; n_z is an integer


def grade_of(cm: CartanMatrix, n: Sequence[int]) -> Fraction:
    z = cm.zero_node
    return Fraction(n[z]) / cm.kac[z]


# ---------------------------------------------------------------------------
# root multiplicities


class RootMultiplicities:
    """Positive roots and their multiplicities, extended lazily in height.

    Obtained by factoring the denominator identity
    ``prod_{alpha>0} (1 - e^{-alpha})^{mult(alpha)} = sum_w eps(w) e^{w rho - rho}``
    one height at a time: the coefficient of ``e^{-beta}`` in the product of
    the factors found so far, minus the right-hand side, is ``mult(beta)``.
    (The Peterson recursion is not usable on its own here: its coefficient
    ``(beta|beta - 2 rho)`` vanishes at every ``rho - w rho``, e.g. at twice
    the highest root of A_2.)
    """

    def __init__(self, cm: CartanMatrix, node_cap: int | None = None):
        self.cm = cm
        self.n = cm.n
        self.form = _IntForm(cm)
        self.cap = node_cap
        self.mult: dict[Vec, int] = {}
        self.height = 0

    def _ok(self, v: Sequence[int]) -> bool:
        return self.cap is None or v[self.cm.zero_node] <= self.cap

    def _denominator(self, height: int) -> dict[Vec, int]:
        """rho - w rho -> eps(w) for all w with height(rho - w rho) <= height."""
        cm, n = self.cm, self.n
        zero = tuple([0] * n)
        # state: (labels of w rho, coefficients of rho - w rho)
        start = (tuple([1] * n), zero)
        out = {zero: 1}
        frontier = [start]
        seen = {zero}
        while frontier:
            nxt = []
            for labels, beta in frontier:
                sign = out[beta]
                for i in range(n):
                    c = labels[i]
                    if c <= 0:
                        continue
                    nb = list(beta)
                    nb[i] += c
                    nb = tuple(nb)
                    if sum(nb) > height or not self._ok(nb) or nb in seen:
                        continue
                    seen.add(nb)
                    out[nb] = -sign
                    nl = tuple(labels[j] - c * cm.entries[i][j] for j in range(n))
                    nxt.append((nl, nb))
            frontier = nxt
        return out

    def extend(self, height: int) -> None:
        if height <= self.height:
            return
        height = max(height, 2 * self.height)
        n = self.n
        D = self._denominator(height)
        zero = tuple([0] * n)
        prod: dict[Vec, int] = {zero: 1}
        buckets: dict[int, set] = {0: {zero}}
        mult: dict[Vec, int] = {}
        for h in range(1, height + 1):
            cands = set(buckets.get(h, ())) | {b for b in D if sum(b) == h}
            new = []
            for beta in sorted(cands):
                m = prod.get(beta, 0) - D.get(beta, 0)
                if m < 0:
                    raise AssertionError(f"negative root multiplicity at {beta}")
                if m:
                    new.append((beta, m))
            for beta, m in new:
                mult[beta] = m
                hb = sum(beta)
                for _ in range(m):
                    # multiply by (1 - x^beta), highest first so sources are old values
                    for hh in range(height - hb, -1, -1):
                        for v in list(buckets.get(hh, ())):
                            c = prod.get(v, 0)
                            if not c:
                                continue
                            w = tuple(x + y for x, y in zip(v, beta))
                            if not self._ok(w):
                                continue
                            val = prod.get(w, 0) - c
                            prod[w] = val
                            buckets.setdefault(hh + hb, set()).add(w)
        self.mult = mult
        self.height = height

    def roots(self, height: int) -> list[tuple[Vec, int]]:
        self.extend(height)
        return sorted(((v, m) for v, m in self.mult.items() if sum(v) <= height), key=lambda t: (sum(t[0]), t[0]))


def root_multiplicities(cm: CartanMatrix, depth: int) -> dict[Vec, int]:
    """Multiplicities of all positive roots of height <= depth."""
    return dict(RootMultiplicities(cm).roots(depth))


# ---------------------------------------------------------------------------
# multiplicity tables


@dataclass(frozen=True)
class MultiplicityTable:
    algebra: CartanMatrix
    highest_weight: WeightCoords
    depth: int | None
    entries: Mapping[Vec, object]
    max_grade: Fraction | None = None
    # largest grade through which the table is known to be complete (affine)
    complete_grade: Fraction | None = None

    def weight(self, n: Sequence[int]) -> WeightCoords:
        cm = self.algebra
        labels = tuple(self.highest_weight.labels[j] - sum(n[i] * cm.entries[i][j] for i in range(cm.n)) for j in range(cm.n))
        grade = self.highest_weight.grade
        if cm.kind is Kind.AFFINE:
            grade -= grade_of(cm, n)
        return WeightCoords(labels, grade)

    def __getitem__(self, n) -> object:
        return self.entries.get(tuple(n), 0)

    def items(self):
        return self.entries.items()

    def total(self):
        return sum(self.entries.values())

    def by_grade(self) -> dict[Fraction, object]:
        out: dict[Fraction, object] = {}
        for n, m in self.entries.items():
            g = grade_of(self.algebra, n)
            out[g] = out.get(g, 0) + m
        return out

    def to_json(self) -> dict:
        def enc(v):
            return v.to_json() if hasattr(v, "to_json") else (str(v) if isinstance(v, Fraction) else v)

        rows = []
        for n in sorted(self.entries, key=lambda v: (sum(v), v)):
            w = self.weight(n)
            rows.append({"n": list(n), "weight": w.to_json(), "value": enc(self.entries[n])})
        out = {
            "highest_weight": self.highest_weight.to_json(),
            "depth": self.depth,
            "entries": rows,
        }
        if self.max_grade is not None:
            out["max_grade"] = str(self.max_grade)
        return out


def _check_dominant_integral(lam: WeightCoords) -> None:
    if not all(x.denominator == 1 and x >= 0 for x in lam.labels):
        raise NotDominantIntegral(f"highest weight {[str(x) for x in lam.labels]} is not dominant integral")


def irreducible_multiplicities(
    cm: CartanMatrix,
    hw: WeightCoords | Sequence,
    depth: int | None = None,
    max_grade=None,
    roots: RootMultiplicities | None = None,
) -> MultiplicityTable:
    """Freudenthal recursion for L(hw), weights with height <= depth and grade <= max_grade.

    (|Lambda+rho|^2 - |lambda+rho|^2) m_lambda
        = 2 sum_{alpha > 0} mult(alpha) sum_{k >= 1} (lambda + k alpha|alpha) m_{lambda + k alpha}
    """
    if not isinstance(hw, WeightCoords):
        hw = WeightCoords.of(hw)
    _check_dominant_integral(hw)
    n = cm.n
    if depth is None and max_grade is None and cm.kind is not Kind.FINITE:
        raise ValueError("infinite-dimensional module needs a depth or a grade bound")
    cap = _grade_cap(cm, max_grade)
    roots = roots or RootMultiplicities(cm, cap)
    form = roots.form
    lam_int = [int(x) for x in hw.labels]
    # (Lambda|alpha_i) and (Lambda + rho|alpha_i), scaled
    lam_dot = [form.E[i] * lam_int[i] for i in range(n)]
    lam_rho_dot = [form.E[i] * (lam_int[i] + 1) for i in range(n)]

    table: dict[Vec, int] = {tuple([0] * n): 1}
    layer = [tuple([0] * n)]
    h = 0
    cut_grades: list[Fraction] = []
    root_list: list[tuple[Vec, int]] = []
    while layer:
        h += 1
        if depth is not None and h > depth:
            # anything reachable next is beyond the depth bound
            for v in layer:
                for i in range(n):
                    w = list(v)
                    w[i] += 1
                    if cap is None or w[cm.zero_node] <= cap:
                        cut_grades.append(grade_of(cm, w) if cm.kind is Kind.AFFINE else Fraction(0))
            break
        cands = set()
        for v in layer:
            for i in range(n):
                w = list(v)
                w[i] += 1
                w = tuple(w)
                if cap is not None and w[cm.zero_node] > cap:
                    continue
                cands.add(w)
        if cands:
            root_list = roots.roots(h)
        nxt = []
        for nu in sorted(cands):
            denom = 2 * sum(lam_rho_dot[i] * nu[i] for i in range(n)) - form.pair(nu, nu)
            rhs = 0
            for alpha, mult in root_list:
                if sum(alpha) > h:
                    break
                if any(a > x for a, x in zip(alpha, nu)):
                    continue
                aa = form.pair(alpha, alpha)
                base = sum(lam_dot[i] * alpha[i] for i in range(n)) - form.pair(nu, alpha)
                k = 1
                while True:
                    prev = tuple(x - k * a for x, a in zip(nu, alpha))
                    if any(x < 0 for x in prev):
                        break
                    m_prev = table.get(prev)
                    if m_prev:
                        rhs += mult * (base + k * aa) * m_prev
                    k += 1
            rhs *= 2
            if denom == 0:
                if rhs != 0:
                    raise AssertionError(f"Freudenthal denominator vanishes at {nu} with nonzero numerator")
                continue
            m = Fraction(rhs, denom)
            if m == 0:
                continue
            if m.denominator != 1 or m < 0:
                raise AssertionError(f"non-integral multiplicity {m} at {nu}")
            if denom < 0:
                raise AssertionError(f"Freudenthal denominator negative at weight {nu}")
            table[nu] = int(m)
            nxt.append(nu)
        layer = nxt

    complete = None
    if cm.kind is Kind.AFFINE:
        bound = Fraction(max_grade) if max_grade is not None else None
        if cut_grades:
            c = min(cut_grades) - 1
            bound = c if bound is None else min(bound, c)
        complete = bound
    return MultiplicityTable(
        algebra=cm,
        highest_weight=hw,
        depth=depth,
        entries=table,
        max_grade=Fraction(max_grade) if max_grade is not None else None,
        complete_grade=complete,
    )


def verma_multiplicities(
    cm: CartanMatrix,
    hw: WeightCoords | Sequence,
    depth: int | None = None,
    max_grade=None,
    roots: RootMultiplicities | None = None,
) -> MultiplicityTable:
    """Kostant partition function prod_{alpha>0} (1 - e^{-alpha})^{-mult(alpha)}, truncated."""
    if not isinstance(hw, WeightCoords):
        hw = WeightCoords.of(hw)
    n = cm.n
    if depth is None:
        raise ValueError("Verma modules need a depth bound")
    cap = _grade_cap(cm, max_grade)
    roots = roots or RootMultiplicities(cm, cap)
    zero = tuple([0] * n)
    table: dict[Vec, int] = {zero: 1}
    buckets: dict[int, list[Vec]] = {0: [zero]}

    def ok(v):
        return sum(v) <= depth and (cap is None or v[cm.zero_node] <= cap)

    for alpha, mult in roots.roots(depth):
        ha = sum(alpha)
        for _ in range(mult):
            for h in range(0, depth - ha + 1):
                for v in list(buckets.get(h, ())):
                    w = tuple(x + a for x, a in zip(v, alpha))
                    if not ok(w):
                        continue
                    if w not in table:
                        table[w] = 0
                        buckets.setdefault(h + ha, []).append(w)
                    table[w] += table[v]
    complete = Fraction(max_grade) if max_grade is not None else None
    return MultiplicityTable(
        algebra=cm,
        highest_weight=hw,
        depth=depth,
        entries=table,
        max_grade=complete,
        complete_grade=None,
    )


def virasoro_specialize(
    table: MultiplicityTable,
    order: int,
    delta=None,
    central_charge=None,
) -> QSeries:
    """Collect a table by grade into q^{Delta - c/24} sum_m (dim at grade m) q^m."""
    cm = table.algebra
    if cm.kind is not Kind.AFFINE:
        raise ValueError("grading needs an affine algebra")
    if table.complete_grade is not None and table.complete_grade < order - 1:
        raise DepthInsufficient(f"table complete only through grade {table.complete_grade}, asked for {order - 1}")
    if table.complete_grade is None and table.max_grade is not None and table.max_grade < order - 1:
        raise DepthInsufficient(f"table only reaches grade {table.max_grade}")
    coeffs = [0] * order
    for g, m in table.by_grade().items():
        if g.denominator != 1:
            raise ValueError(f"non-integral grade {g}")
        if g < order:
            coeffs[int(g)] = coeffs[int(g)] + m
    leading = Fraction(0)
    if delta is not None:
        leading += Fraction(delta)
    if central_charge is not None:
        leading -= Fraction(central_charge) / 24
    return QSeries.make(leading, coeffs, order)


def weyl_dimension(cm: CartanMatrix, hw: WeightCoords | Sequence) -> Fraction:
    """prod_{alpha > 0} (Lambda + rho|alpha) / (rho|alpha) for finite type."""
    from .cartan import positive_roots_finite

    if not isinstance(hw, WeightCoords):
        hw = WeightCoords.of(hw)
    out = Fraction(1)
    for alpha in positive_roots_finite(cm):
        num = sum(alpha[i] * cm.norms[i] * (hw.labels[i] + 1) for i in range(cm.n))
        den = sum(alpha[i] * cm.norms[i] for i in range(cm.n))
        out *= num / den
    return out
