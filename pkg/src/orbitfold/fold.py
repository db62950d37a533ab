"""Diagram automorphisms, orbit data and the orbit Lie algebra (folding).

The folded matrix is
``A_fold[[i]][[j]] = s_i * (N_i / N) * sum_{l=0}^{N-1} A[w^l i][j]``
with orbit weights ``s_i = 1 - sum_{l=1}^{N_i-1} A[w^l i][i]``. It is a
symmetrizable GCM whenever every ``s_i`` is 1 or 2 (the linking condition).

The folded algebra carries the invariant form induced from the original one,
``(lam|mu) = N (lam_fold|mu_fold)`` for symmetric weights, and for affine
input the dual Kac labels ``N_i a_i^v / N``. With this normalization the
folded level is the original level divided by N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from .cartan import CartanMatrix, Kind, WeightCoords, validate_cartan
from .errors import (
    DimensionMismatch,
    LinkingConditionViolated,
    NotAutomorphism,
    NotInvariant,
    NotSymmetricWeight,
)


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: tuple[int, ...]
    order: int
    # affine only: grade correction making the dual action an isometry,
    # (w* lam).grade = lam.grade + sum_i grade_shift[i] lam^i
    grade_shift: tuple[Fraction, ...] | None = None

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def power(self, k: int) -> tuple[int, ...]:
        p = list(range(len(self.perm)))
        for _ in range(k % self.order):
            p = [self.perm[x] for x in p]
        return tuple(p)

    def act_labels(self, labels: Sequence) -> tuple:
        """Dual action on weights: (w* lam)^{w(i)} = lam^i."""
        out = [None] * len(labels)
        for i, x in enumerate(labels):
            out[self.perm[i]] = x
        return tuple(out)

    def act_weight(self, w: WeightCoords) -> WeightCoords:
        grade = w.grade
        if self.grade_shift is not None:
            grade += sum((c * x for c, x in zip(self.grade_shift, w.labels)), Fraction(0))
        return WeightCoords(self.act_labels(w.labels), grade)

    def is_identity(self) -> bool:
        return self.order == 1


def _perm_order(perm: Sequence[int]) -> int:
    seen, lengths = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        k, x = 0, s
        while x not in seen:
            seen.add(x)
            x = perm[x]
            k += 1
        lengths.append(k)
    return lcm(*lengths) if lengths else 1


def validate_automorphism(cm: CartanMatrix, perm: Sequence[int]) -> DiagramAutomorphism:
    perm = tuple(int(x) for x in perm)
    n = cm.n
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise NotAutomorphism(f"{perm} is not a permutation of 0..{n - 1}")
    for i in range(n):
        for j in range(n):
            if cm[perm[i], perm[j]] != cm[i, j]:
                raise NotAutomorphism(
                    f"A[{perm[i]}][{perm[j]}] = {cm[perm[i], perm[j]]} != A[{i}][{j}] = {cm[i, j]}"
                )
    shift = _dual_grade_shift(cm, perm) if cm.kind is Kind.AFFINE else None
    return DiagramAutomorphism(perm, _perm_order(perm), shift)


def _dual_grade_shift(cm: CartanMatrix, perm: tuple[int, ...]) -> tuple[Fraction, ...]:
    n = cm.n
    fw = [cm.fundamental_weight(i) for i in range(n)]
    shift = [(cm.inner(fw[i], fw[i]) - cm.inner(fw[perm[i]], fw[perm[i]])) / (2 * cm.dual_kac[i]) for i in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = cm.inner(fw[perm[i]], fw[perm[j]]) + shift[i] * cm.dual_kac[j] + shift[j] * cm.dual_kac[i]
            if lhs != cm.inner(fw[i], fw[j]):
                raise NotAutomorphism("permutation does not extend to an isometry of the weight space")
    return tuple(shift)


def compose(a: DiagramAutomorphism, b: DiagramAutomorphism) -> DiagramAutomorphism:
    """a after b."""
    perm = tuple(a.perm[b.perm[i]] for i in range(len(a.perm)))
    shift = None
    if a.grade_shift is not None and b.grade_shift is not None:
        # (a b)* lam = a*(b* lam): b's shift, then a's shift on permuted labels
        shift = tuple(b.grade_shift[i] + a.grade_shift[b.perm[i]] for i in range(len(perm)))
    return DiagramAutomorphism(perm, _perm_order(perm), shift)


def commute(a: DiagramAutomorphism, b: DiagramAutomorphism) -> bool:
    return compose(a, b).perm == compose(b, a).perm


@dataclass(frozen=True)
class OrbitData:
    orbits: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]
    weights: tuple[int, ...]
    linking_ok: bool
    order: int
    n: int

    @cached_property
    def orbit_of(self) -> tuple[int, ...]:
        idx = [0] * self.n
        for k, orb in enumerate(self.orbits):
            for i in orb:
                idx[i] = k
        return tuple(idx)

    def to_json(self) -> dict:
        return {
            "orbits": [list(o) for o in self.orbits],
            "N_i": list(self.lengths),
            "s_i": list(self.weights),
            "linking_ok": self.linking_ok,
            "N": self.order,
        }


def orbit_data(cm: CartanMatrix, aut: DiagramAutomorphism) -> OrbitData:
    n = cm.n
    seen: set[int] = set()
    orbits = []
    for s in range(n):
        if s in seen:
            continue
        orb, x = [], s
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = aut(x)
        orbits.append(tuple(sorted(orb)))
    orbits.sort(key=lambda o: o[0])
    lengths = tuple(len(o) for o in orbits)
    weights = []
    for orb in orbits:
        i = orb[0]
        s = 1
        x = aut(i)
        while x != i:
            s -= cm[x, i]
            x = aut(x)
        weights.append(s)
    return OrbitData(
        orbits=tuple(orbits),
        lengths=lengths,
        weights=tuple(weights),
        linking_ok=all(s in (1, 2) for s in weights),
        order=aut.order,
        n=n,
    )


@dataclass(frozen=True)
class FoldResult:
    folded: CartanMatrix
    orbit_data: OrbitData
    source: CartanMatrix
    automorphism: DiagramAutomorphism
    # affine only: g-grade = fold-grade + sum_k grade_shift[k] * labels[k]
    grade_shift: tuple[Fraction, ...] | None = None

    @property
    def N(self) -> int:
        return self.automorphism.order

    def expected_symmetrizer_ratio(self) -> list[Fraction]:
        """N d_i / (s_i N_i) per orbit, proportional to the folded symmetrizer."""
        od = self.orbit_data
        d = self.source.symmetrizer
        return [Fraction(self.N * d[o[0]], s * ln) for o, s, ln in zip(od.orbits, od.weights, od.lengths)]

    def to_json(self) -> dict:
        out = self.orbit_data.to_json()
        out["folded_cartan"] = self.folded.as_lists()
        out["folded_symmetrizer"] = list(self.folded.symmetrizer)
        out["folded_kind"] = self.folded.kind.value
        return out


def _folded_entries(cm: CartanMatrix, aut: DiagramAutomorphism, od: OrbitData) -> list[list[int]]:
    m = len(od.orbits)
    N = aut.order
    rows = [[0] * m for _ in range(m)]
    for a, orb_i in enumerate(od.orbits):
        i = orb_i[0]
        powers = [aut.power(l)[i] for l in range(N)]
        for b, orb_j in enumerate(od.orbits):
            j = orb_j[0]
            total = sum(cm[p, j] for p in powers)
            v = Fraction(od.weights[a] * od.lengths[a] * total, N)
            assert v.denominator == 1
            rows[a][b] = int(v)
    return rows


def fold(cm: CartanMatrix, aut: DiagramAutomorphism) -> FoldResult:
    od = orbit_data(cm, aut)
    if not od.linking_ok:
        raise LinkingConditionViolated(f"orbit weights {od.weights} not all in {{1, 2}}")
    rows = _folded_entries(cm, aut, od)
    N = aut.order
    norms = []
    for orb, s in zip(od.orbits, od.weights):
        # (alpha_f|alpha_f) = (s^2/N) |sum_{l} alpha_{w^l i}|^2
        vec = [Fraction(int(k in orb)) for k in range(cm.n)]
        norms.append(Fraction(s * s) * cm.root_inner(vec, vec) / (2 * N))
    dual = None
    zero = 0
    if cm.kind is Kind.AFFINE:
        dual = [Fraction(ln) * cm.dual_kac[orb[0]] / N for orb, ln in zip(od.orbits, od.lengths)]
        zero = od.orbit_of[cm.zero_node]
    folded = validate_cartan(rows, name=None, zero_node=zero, norms=norms, dual_kac=dual)
    if folded.kind is Kind.AFFINE:
        for orb, s, a in zip(od.orbits, od.weights, folded.kac):
            if s * a != cm.kac[orb[0]]:
                raise AssertionError("folded null root does not lift to the null root")
    result = FoldResult(folded=folded, orbit_data=od, source=cm, automorphism=aut)
    if cm.kind is Kind.AFFINE:
        object.__setattr__(result, "grade_shift", _grade_shift(result))
    return result


# ---------------------------------------------------------------------------
# P_w on Cartan elements and its dual on weights


def project_cartan_element(od: OrbitData, v: Sequence) -> tuple[Fraction, ...]:
    """Coefficients of P_w(h) over the folded coroots, for h = sum v_i H^i."""
    if len(v) != od.n:
        raise DimensionMismatch("coefficient vector has wrong length")
    out = []
    for orb, ln in zip(od.orbits, od.lengths):
        vals = {Fraction(v[i]) for i in orb}
        if len(vals) != 1:
            raise NotInvariant(f"coefficients not constant on orbit {orb}")
        out.append(ln * vals.pop())
    return tuple(out)


def is_symmetric(od: OrbitData, labels: Sequence) -> bool:
    return all(len({Fraction(labels[i]) for i in orb}) == 1 for orb in od.orbits)


def _labels_down(od: OrbitData, labels: Sequence) -> tuple[Fraction, ...]:
    if len(labels) != od.n:
        raise DimensionMismatch("weight has wrong number of labels")
    if not is_symmetric(od, labels):
        raise NotSymmetricWeight(f"labels {tuple(str(x) for x in labels)} are not constant on orbits")
    return tuple(Fraction(labels[orb[0]]) for orb in od.orbits)


def _labels_up(od: OrbitData, labels: Sequence) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * od.n
    for k, orb in enumerate(od.orbits):
        for i in orb:
            out[i] = Fraction(labels[k])
    return tuple(out)


def _grade_shift(fr: FoldResult) -> tuple[Fraction, ...]:
    """Linear grade correction making the lift an isometry up to the factor N."""
    f, g, N = fr.folded, fr.source, fr.N
    m = f.n
    shift = []
    for k in range(m):
        lam = f.fundamental_weight(k)
        up = WeightCoords(_labels_up(fr.orbit_data, lam.labels))
        r = N * f.inner(lam, lam) - g.inner(up, up)
        # g-level of the lifted weight is N * (folded level)
        shift.append(r / (2 * N * f.level(lam)))
    # cross terms must agree as well
    for k in range(m):
        for l in range(k + 1, m):
            a, b = f.fundamental_weight(k), f.fundamental_weight(l)
            ua = WeightCoords(_labels_up(fr.orbit_data, a.labels), shift[k])
            ub = WeightCoords(_labels_up(fr.orbit_data, b.labels), shift[l])
            if g.inner(ua, ub) != N * f.inner(a, b):
                raise AssertionError("induced form is not consistent with the folded form")
    return tuple(shift)


def project_weight(fr: FoldResult, lam: WeightCoords) -> WeightCoords:
    """Inverse of the lift P*_w: symmetric g-weight -> folded weight."""
    labels = _labels_down(fr.orbit_data, lam.labels)
    grade = Fraction(0)
    if fr.grade_shift is not None:
        grade = lam.grade - sum((s * x for s, x in zip(fr.grade_shift, labels)), Fraction(0))
    return WeightCoords(labels, grade)


def lift_weight(fr: FoldResult, lam: WeightCoords) -> WeightCoords:
    """P*_w: folded weight -> symmetric g-weight."""
    if lam.n != fr.folded.n:
        raise DimensionMismatch("weight is not over the folded algebra")
    labels = _labels_up(fr.orbit_data, lam.labels)
    grade = Fraction(0)
    if fr.grade_shift is not None:
        grade = lam.grade + sum((s * x for s, x in zip(fr.grade_shift, lam.labels)), Fraction(0))
    return WeightCoords(labels, grade)


def lift_root_coeffs(fr: FoldResult, coeffs: Sequence[int]) -> tuple[int, ...]:
    """sum_k c_k alpha_fold_k lifts to sum_k c_k s_k sum_{i in orbit k} alpha_i."""
    out = [0] * fr.orbit_data.n
    for c, orb, s in zip(coeffs, fr.orbit_data.orbits, fr.orbit_data.weights):
        for i in orb:
            out[i] = c * s
    return tuple(out)


def cartan_inner(cm: CartanMatrix, v: Sequence, w: Sequence) -> Fraction:
    """(h|h') for h = sum v_i H^i; H^i is dual to alpha_i^v = alpha_i / E_i."""
    n = cm.n
    return sum(
        (Fraction(v[i]) * Fraction(w[j]) * cm.entries[i][j] / cm.norms[i] for i in range(n) for j in range(n) if v[i] and w[j]),
        Fraction(0),
    )


def check_norm_relation(fr: FoldResult, h1: Sequence, h2: Sequence) -> bool:
    p1 = project_cartan_element(fr.orbit_data, h1)
    p2 = project_cartan_element(fr.orbit_data, h2)
    return cartan_inner(fr.folded, p1, p2) == fr.N * cartan_inner(fr.source, h1, h2)


def folded_level(fr: FoldResult, lam: WeightCoords) -> Fraction:
    return fr.folded.level(project_weight(fr, lam))
