"""Generalized Cartan matrices, their symmetrizers, types and invariant forms.

Convention: ``entries[i][j] = alpha_i(H^j)``, i.e. the Dynkin labels of the
simple root ``alpha_i`` are row ``i`` of the matrix, and
``A[i][j] = 2 (alpha_i|alpha_j) / (alpha_j|alpha_j)``. The symmetrizer ``d``
makes ``diag(d) A`` symmetric, hence ``(alpha_i|alpha_i)`` is proportional to
``1/d_i``.

Weights are stored as Dynkin labels ``lambda^i = lambda(H^i)`` plus a rational
grade. For affine matrices the grade is the coefficient of the null root
``delta`` in ``lambda = sum_i lambda^i Lambda_i + grade * delta`` where the
fundamental weights are normalized by ``(Lambda_i | xi) = 0``; here ``xi`` is
the grade-0 fundamental weight of the distinguished node ("node 0").
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionMismatch, Disconnected, NotGCM, NotSymmetrizable


class Kind(str, enum.Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class WeightCoords:
    labels: tuple[Fraction, ...]
    grade: Fraction = Fraction(0)

    @classmethod
    def of(cls, labels: Iterable, grade=0) -> "WeightCoords":
        return cls(tuple(Fraction(x) for x in labels), Fraction(grade))

    def __add__(self, other: "WeightCoords") -> "WeightCoords":
        if len(self.labels) != len(other.labels):
            raise DimensionMismatch("weights over different algebras")
        return WeightCoords(tuple(a + b for a, b in zip(self.labels, other.labels)), self.grade + other.grade)

    def __sub__(self, other: "WeightCoords") -> "WeightCoords":
        return self + other.scale(-1)

    def scale(self, c) -> "WeightCoords":
        c = Fraction(c)
        return WeightCoords(tuple(c * x for x in self.labels), c * self.grade)

    def __neg__(self) -> "WeightCoords":
        return self.scale(-1)

    @property
    def n(self) -> int:
        return len(self.labels)

    def is_dominant(self) -> bool:
        return all(x >= 0 for x in self.labels)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.labels)

    def to_json(self) -> dict:
        return {"labels": [str(x) for x in self.labels], "grade": str(self.grade)}


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...]
    kind: Kind
    hyperbolic: bool = False
    name: str | None = None
    # half squared lengths (alpha_i|alpha_i)/2 of the normalized invariant form
    norms: tuple[Fraction, ...] = ()
    # affine only: dual Kac labels a_i^v (level = sum a_i^v lambda^i)
    dual_kac: tuple[Fraction, ...] | None = None
    zero_node: int = 0

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    # ---- affine data -------------------------------------------------
    @cached_property
    def kac(self) -> tuple[Fraction, ...] | None:
        """Coefficients a_i of the null root delta = sum a_i alpha_i."""
        if self.dual_kac is None:
            return None
        return tuple(av / e for av, e in zip(self.dual_kac, self.norms))

    @property
    def dual_coxeter(self) -> Fraction:
        return sum(self.dual_kac, Fraction(0))

    def level(self, weight: WeightCoords | Sequence) -> Fraction:
        labels = weight.labels if isinstance(weight, WeightCoords) else weight
        return sum((a * Fraction(x) for a, x in zip(self.dual_kac, labels)), Fraction(0))

    # ---- root lattice --------------------------------------------------
    def root_labels(self, coeffs: Sequence) -> tuple[Fraction, ...]:
        """Dynkin labels of sum_i coeffs[i] alpha_i."""
        n = self.n
        return tuple(sum((Fraction(coeffs[i]) * self.entries[i][j] for i in range(n)), Fraction(0)) for j in range(n))

    def root_inner(self, x: Sequence, y: Sequence) -> Fraction:
        """(sum x_i alpha_i | sum y_j alpha_j)."""
        total = Fraction(0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.entries[i]
            for j, yj in enumerate(y):
                if yj and row[j]:
                    total += xi * yj * row[j] * self.norms[j]
        return total

    def simple_root(self, i: int) -> WeightCoords:
        grade = Fraction(0)
        if self.kind is Kind.AFFINE and i == self.zero_node:
            grade = 1 / self.kac[self.zero_node]
        return WeightCoords(tuple(Fraction(x) for x in self.entries[i]), grade)

    def fundamental_weight(self, i: int) -> WeightCoords:
        return WeightCoords(tuple(Fraction(int(j == i)) for j in range(self.n)))

    def rho(self) -> WeightCoords:
        return WeightCoords((Fraction(1),) * self.n)

    def delta(self) -> WeightCoords:
        return WeightCoords((Fraction(0),) * self.n, Fraction(1))

    # ---- invariant form on weights -------------------------------------
    @cached_property
    def _weight_gram(self) -> linalg.Matrix:
        n = self.n
        A = [[Fraction(x) for x in row] for row in self.entries]
        if self.kind is Kind.AFFINE:
            z = self.zero_node
            # coordinates over (alpha_0..alpha_{n-1}, xi)
            M = [[A[i][j] * self.norms[j] for j in range(n)] + [self.norms[z] if i == z else Fraction(0)] for i in range(n)]
            M.append([self.norms[z] if j == z else Fraction(0) for j in range(n)] + [Fraction(0)])
            L = [[A[i][j] for i in range(n)] + [Fraction(int(j == z))] for j in range(n)]
            L.append([Fraction(0)] * (n + 1))
            L[n][z] = 1 / self.kac[z]
        else:
            if linalg.det(A) == 0:
                raise NotImplementedError("invariant form on weights needs a nondegenerate Cartan matrix")
            M = [[A[i][j] * self.norms[j] for j in range(n)] for i in range(n)]
            L = linalg.transpose(A)
        Linv = linalg.inverse(L)
        return linalg.matmul(linalg.matmul(linalg.transpose(Linv), M), Linv)

    def _vec(self, w: WeightCoords) -> list[Fraction]:
        if w.n != self.n:
            raise DimensionMismatch(f"weight has {w.n} labels, algebra has {self.n} nodes")
        v = list(w.labels)
        if self.kind is Kind.AFFINE:
            v.append(w.grade)
        return v

    def inner(self, a: WeightCoords, b: WeightCoords) -> Fraction:
        G = self._weight_gram
        u, v = self._vec(a), self._vec(b)
        return sum((u[i] * G[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j]), Fraction(0))

    def to_json(self) -> dict:
        out = {
            "cartan": self.as_lists(),
            "symmetrizer": list(self.symmetrizer),
            "kind": self.kind.value,
            "hyperbolic": self.hyperbolic,
        }
        if self.name:
            out["name"] = self.name
        out["norms"] = [str(x) for x in self.norms]
        if self.dual_kac is not None:
            out["dual_kac"] = [str(x) for x in self.dual_kac]
            out["kac"] = [str(x) for x in self.kac]
            out["zero_node"] = self.zero_node
        return out


def weight_inner_product(cm: CartanMatrix, lam: WeightCoords, mu: WeightCoords) -> Fraction:
    return cm.inner(lam, mu)


# ---------------------------------------------------------------------------
# validation and classification


def _check_gcm(rows: list[list[int]]) -> None:
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotGCM("matrix must be square and nonempty")
    for i in range(n):
        if rows[i][i] != 2:
            raise NotGCM(f"diagonal entry A[{i}][{i}] = {rows[i][i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if rows[i][j] > 0:
                raise NotGCM(f"positive off-diagonal entry A[{i}][{j}] = {rows[i][j]}")
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                raise NotGCM(f"zero pattern asymmetric at ({i},{j})")


def _components(rows: Sequence[Sequence[int]], nodes: Iterable[int]) -> list[list[int]]:
    nodes = list(nodes)
    left = set(nodes)
    comps = []
    for start in nodes:
        if start not in left:
            continue
        comp, queue = [], deque([start])
        left.discard(start)
        while queue:
            i = queue.popleft()
            comp.append(i)
            for j in list(left):
                if rows[i][j] != 0:
                    left.discard(j)
                    queue.append(j)
        comps.append(sorted(comp))
    return comps


def _symmetrizer(rows: list[list[int]]) -> tuple[int, ...]:
    n = len(rows)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(n):
            if j != i and rows[i][j] != 0 and d[j] is None:
                # d_i A_ij = d_j A_ji
                d[j] = d[i] * rows[i][j] / rows[j][i]
                queue.append(j)
    for i in range(n):
        for j in range(n):
            if d[i] * rows[i][j] != d[j] * rows[j][i]:
                raise NotSymmetrizable(f"cycle of ratios inconsistent at ({i},{j})")
    den = 1
    for x in d:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _kind_of(rows: Sequence[Sequence[int]], sym: Sequence[int]) -> Kind:
    n = len(rows)
    B = [[Fraction(sym[i] * rows[i][j]) for j in range(n)] for i in range(n)]
    pos, zero, neg = linalg.inertia(B)
    if pos == n:
        return Kind.FINITE
    if zero == 1 and neg == 0:
        return Kind.AFFINE
    return Kind.INDEFINITE


def _sub_kind(rows: Sequence[Sequence[int]], sym: Sequence[int], nodes: list[int]) -> Kind:
    sub = [[rows[i][j] for j in nodes] for i in nodes]
    return _kind_of(sub, [sym[i] for i in nodes])


def _is_hyperbolic(rows, sym) -> bool:
    n = len(rows)
    for k in range(n):
        rest = [i for i in range(n) if i != k]
        for comp in _components(rows, rest):
            if _sub_kind(rows, sym, comp) is Kind.INDEFINITE:
                return False
    return True


def _default_norms(rows, sym, kind: Kind):
    n = len(rows)
    if kind is Kind.AFFINE:
        A = linalg.to_fractions(rows)
        av = linalg.primitive_integer_vector(linalg.nullspace(A)[0])
        a = linalg.primitive_integer_vector(linalg.nullspace(linalg.transpose(A))[0])
        norms = tuple(Fraction(av[i], a[i]) for i in range(n))
        return norms, tuple(Fraction(x) for x in av)
    dmin = min(sym)
    return tuple(Fraction(dmin, x) for x in sym), None


def validate_cartan(
    matrix: Sequence[Sequence[int]],
    name: str | None = None,
    *,
    zero_node: int = 0,
    norms: Sequence[Fraction] | None = None,
    dual_kac: Sequence[Fraction] | None = None,
) -> CartanMatrix:
    """Validate an integer matrix as a connected symmetrizable GCM.

    ``norms`` and ``dual_kac`` override the default normalization of the
    invariant form (used for algebras obtained by folding).
    """
    try:
        rows = [[int(x) for x in row] for row in matrix]
    except (TypeError, ValueError) as exc:
        raise NotGCM(f"entries must be integers: {exc}") from None
    if any(Fraction(x) != int(x) for row in matrix for x in row):
        raise NotGCM("entries must be integers")
    _check_gcm(rows)
    n = len(rows)
    if len(_components(rows, range(n))) > 1:
        raise Disconnected("Dynkin diagram is not connected")
    sym = _symmetrizer(rows)
    kind = _kind_of(rows, sym)
    hyper = kind is Kind.INDEFINITE and _is_hyperbolic(rows, sym)
    default_norms, default_dual = _default_norms(rows, sym, kind)
    if norms is None:
        norms = default_norms
        dual_kac = default_dual
    else:
        norms = tuple(Fraction(x) for x in norms)
        if kind is Kind.AFFINE:
            if dual_kac is None:
                raise ValueError("affine normalization override needs dual_kac")
            dual_kac = tuple(Fraction(x) for x in dual_kac)
        # A_ij E_j must be symmetric
        for i in range(n):
            for j in range(n):
                if rows[i][j] * norms[j] != rows[j][i] * norms[i]:
                    raise NotSymmetrizable("supplied root norms do not symmetrize the matrix")
    if kind is Kind.AFFINE and not 0 <= zero_node < n:
        raise ValueError("zero_node out of range")
    cm = CartanMatrix(
        entries=tuple(tuple(r) for r in rows),
        symmetrizer=sym,
        kind=kind,
        hyperbolic=hyper,
        name=name,
        norms=tuple(norms),
        dual_kac=dual_kac,
        zero_node=zero_node,
    )
    if kind is Kind.AFFINE:
        # delta = sum a_i alpha_i must have vanishing labels
        if any(cm.root_labels(cm.kac)):
            raise NotSymmetrizable("dual Kac labels inconsistent with root norms")
    return cm


def classify(cm: CartanMatrix) -> tuple[Kind, bool]:
    kind = _kind_of(cm.entries, cm.symmetrizer)
    return kind, kind is Kind.INDEFINITE and _is_hyperbolic(cm.entries, cm.symmetrizer)


# ---------------------------------------------------------------------------
# finite root systems and affinization


def submatrix(cm: CartanMatrix, nodes: Sequence[int], name: str | None = None) -> CartanMatrix:
    rows = [[cm.entries[i][j] for j in nodes] for i in nodes]
    return validate_cartan(rows, name=name)


def positive_roots_finite(cm: CartanMatrix) -> list[tuple[int, ...]]:
    """Positive roots of a finite-type matrix as simple-root coefficient vectors, by height."""
    if cm.kind is not Kind.FINITE:
        raise ValueError("positive_roots_finite needs a finite-type matrix")
    n = cm.n
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    ordered = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            labels = [sum(beta[k] * cm.entries[k][i] for k in range(n)) for i in range(n)]
            for i in range(n):
                if beta == simple[i]:
                    continue
                # p = how far the i-string extends downwards
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                q = p - labels[i]
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
                        ordered.append(up)
        layer = nxt
    return ordered


def highest_root(cm: CartanMatrix) -> tuple[int, ...]:
    return max(positive_roots_finite(cm), key=sum)


def dimension_finite(cm: CartanMatrix) -> int:
    return cm.n + 2 * len(positive_roots_finite(cm))


def affinize(cm: CartanMatrix, name: str | None = None) -> CartanMatrix:
    """Untwisted affine extension; the new affine node gets index 0."""
    theta = highest_root(cm)
    n = cm.n
    theta_dot = [sum(theta[i] * cm.entries[i][j] * cm.norms[j] for i in range(n)) for j in range(n)]
    theta_sq = sum(theta[j] * theta_dot[j] for j in range(n))
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    rows[0][0] = 2
    for j in range(n):
        a0j = -theta_dot[j] / cm.norms[j]
        aj0 = -2 * theta_dot[j] / theta_sq
        assert a0j.denominator == 1 and aj0.denominator == 1
        rows[0][j + 1] = int(a0j)
        rows[j + 1][0] = int(aj0)
        for k in range(n):
            rows[j + 1][k + 1] = cm.entries[j][k]
    return validate_cartan(rows, name=name, zero_node=0)


def horizontal(cm: CartanMatrix) -> CartanMatrix:
    """Finite matrix obtained by deleting the distinguished node of an affine matrix."""
    z = cm.zero_node
    nodes = [i for i in range(cm.n) if i != z]
    return submatrix(cm, nodes)
