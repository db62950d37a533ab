"""Twining characters: brute-force module oracle, the orbit-algebra route, and
the rotation special case for A_{N-1}^(1).

Oracle construction. The weight space ``W_n`` of the module (weight
``Lambda - sum n_i alpha_i``) is spanned by the vectors ``f_j b`` with ``b``
running over a basis of ``W_{n - e_j}``. Their Gram matrix for the
contravariant form (``e_i`` adjoint to ``f_i``) follows from

    <f_j b, f_k c> = <b, f_k e_j c> + delta_jk lambda_c(H^j) <b, c>,

where ``e_j`` on lower layers is recovered from ``f_j`` by contravariance.
Keeping only linearly independent Gram columns realizes the irreducible
quotient L(Lambda) (the radical of the form is the maximal submodule). The
automorphism acts by ``tau(f_j b) = f_{w(j)} tau(b)`` with the highest weight
vector fixed, so its matrices follow layer by layer.

For the Verma variant the same construction runs at a generic symmetric
highest weight, where the form is nondegenerate; the trace of ``tau`` on
``U(n_-)`` does not depend on the highest weight.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint

from .cartan import CartanMatrix, Kind, WeightCoords
from .characters import (
    MultiplicityTable,
    RootMultiplicities,
    grade_of,
    irreducible_multiplicities,
    verma_multiplicities,
)
from .cyclotomic import Cyclotomic
from .errors import (
    DepthBudgetExceeded,
    NotRotation,
    NotSymmetricWeight,
    WeightNotAtLevel,
)
from .fold import DiagramAutomorphism, FoldResult, is_symmetric, lift_root_coeffs, project_weight
from .qseries import QSeries

log = logging.getLogger(__name__)

Vec = tuple[int, ...]

MAX_DEPTH = 8
MAX_RANK = 5
# generic highest weights for the Verma variant: labels c_k / _GENERIC_P per orbit
_GENERIC_P = 10007


def _q(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _zeros(r: int, c: int) -> flint.fmpq_mat:
    return flint.fmpq_mat(r, c)


def _pivots(m: flint.fmpq_mat) -> list[int]:
    red, rank = m.rref()
    piv = []
    for r in range(rank):
        for c in range(m.ncols()):
            if red[r, c] != 0:
                piv.append(c)
                break
    return piv


def _submatrix(m: flint.fmpq_mat, rows: Sequence[int], cols: Sequence[int]) -> flint.fmpq_mat:
    out = flint.fmpq_mat(len(rows), len(cols))
    for a, r in enumerate(rows):
        for b, c in enumerate(cols):
            out[a, b] = m[r, c]
    return out


def _identity(k: int) -> flint.fmpq_mat:
    out = flint.fmpq_mat(k, k)
    for i in range(k):
        out[i, i] = 1
    return out


def _trace(m: flint.fmpq_mat) -> Fraction:
    t = flint.fmpq(0)
    for i in range(m.nrows()):
        t += m[i, i]
    return Fraction(int(t.p), int(t.q))


@dataclass
class OracleModule:
    algebra: CartanMatrix
    automorphism: DiagramAutomorphism
    highest_weight: WeightCoords
    depth: int
    max_grade: Fraction | None
    verma: bool
    # per weight: list of (j, index into basis of n - e_j); the h.w. vector is ()
    basis: dict[Vec, list] = field(default_factory=dict)
    gram: dict[Vec, flint.fmpq_mat] = field(default_factory=dict)
    gram_inv: dict[Vec, flint.fmpq_mat] = field(default_factory=dict)
    # f_k : W_n -> W_{n + e_k}, keyed (k, n)
    lower: dict[tuple[int, Vec], flint.fmpq_mat] = field(default_factory=dict)
    # tau : W_n -> W_{w n}
    tau: dict[Vec, flint.fmpq_mat] = field(default_factory=dict)
    # number of candidate vectors per weight (size of the spanning set)
    candidates: dict[Vec, int] = field(default_factory=dict)

    def quotient_rank(self, n: Vec) -> int:
        return len(self.basis.get(tuple(n), ()))

    @property
    def tau_matrix(self):
        return self.tau

    def act(self, n: Vec) -> Vec:
        return tuple(self.automorphism.act_labels(n))

    def raise_op(self, j: int, n: Vec) -> flint.fmpq_mat | None:
        """e_j : W_n -> W_{n - e_j} from contravariance."""
        m = list(n)
        m[j] -= 1
        m = tuple(m)
        if m not in self.basis or not self.basis[m] or not self.basis.get(n):
            return None
        return self.gram_inv[m] * self.lower[(j, m)].transpose() * self.gram[n]


def _label(cm: CartanMatrix, hw: Sequence, n: Sequence[int], j: int):
    """(Lambda - sum n_i alpha_i)(H^j)."""
    return hw[j] - sum(n[i] * cm.entries[i][j] for i in range(cm.n) if n[i])


def _capped_nodes(cm: CartanMatrix, aut: DiagramAutomorphism, max_grade) -> list[tuple[int, int]]:
    """Grade truncation made automorphism invariant: bound n_i on the whole
    orbit of the distinguished node, so the kept weights form a w-stable set.
    On symmetric weights this is exactly the grade bound."""
    if max_grade is None:
        return []
    z = cm.zero_node
    cap = int(Fraction(max_grade) * cm.kac[z])
    out, x = [], z
    while True:
        out.append((x, cap))
        x = aut(x)
        if x == z:
            return out


def generic_symmetric_weight(cm: CartanMatrix, aut: DiagramAutomorphism) -> WeightCoords:
    """A symmetric highest weight avoiding every Verma reducibility hyperplane."""
    labels = [None] * cm.n
    k = 0
    for i in range(cm.n):
        if labels[i] is not None:
            continue
        k += 1
        x = i
        while labels[x] is None:
            labels[x] = Fraction(k, _GENERIC_P)
            x = aut(x)
    return WeightCoords(tuple(labels))


def build_oracle_module(
    cm: CartanMatrix,
    aut: DiagramAutomorphism,
    hw: WeightCoords | Sequence,
    depth: int,
    max_grade=None,
    verma: bool = False,
    max_depth: int | None = MAX_DEPTH,
) -> OracleModule:
    """Explicit irreducible (or Verma) module with the induced automorphism.

    For infinite-dimensional algebras the depth is limited to ``max_depth``
    (default 8) unless the caller raises or disables the budget.
    """
    if not isinstance(hw, WeightCoords):
        hw = WeightCoords.of(hw)
    if cm.kind is not Kind.FINITE and max_depth is not None and depth > max_depth:
        raise DepthBudgetExceeded(f"oracle depth {depth} exceeds the budget {max_depth}")
    if cm.n > MAX_RANK:
        raise DepthBudgetExceeded(f"oracle limited to rank {MAX_RANK}")
    if verma:
        hw = generic_symmetric_weight(cm, aut)
    if tuple(aut.act_labels(hw.labels)) != hw.labels:
        raise NotSymmetricWeight("highest weight is not fixed by the automorphism")
    n = cm.n
    capped = _capped_nodes(cm, aut, max_grade)
    lam = list(hw.labels)
    mod = OracleModule(cm, aut, hw, depth, Fraction(max_grade) if max_grade is not None else None, verma)
    zero = tuple([0] * n)
    mod.basis[zero] = [()]
    g0 = _identity(1)
    mod.gram[zero] = g0
    mod.gram_inv[zero] = g0
    mod.tau[zero] = _identity(1)
    mod.candidates[zero] = 1
    layer = [zero]
    for h in range(1, depth + 1):
        targets = set()
        for v in layer:
            for k in range(n):
                w = list(v)
                w[k] += 1
                w = tuple(w)
                if any(w[i] > c for i, c in capped):
                    continue
                targets.add(w)
        new_layer = []
        for w in sorted(targets):
            cands = []
            blocks = []  # (j, source weight, size)
            for j in range(n):
                if w[j] == 0:
                    continue
                src = list(w)
                src[j] -= 1
                src = tuple(src)
                size = len(mod.basis.get(src, ()))
                if size:
                    blocks.append((j, src, size))
                    cands.extend((j, b) for b in range(size))
            if not cands:
                continue
            total = len(cands)
            C = _zeros(total, total)
            offs = []
            o = 0
            for j, src, size in blocks:
                offs.append(o)
                o += size
            for bj, (j, src_j, size_j) in enumerate(blocks):
                for bk, (k, src_k, size_k) in enumerate(blocks):
                    # <f_j b, f_k c> for b in W_{src_j}, c in W_{src_k}
                    block = _zeros(size_j, size_k)
                    mid = list(w)
                    mid[j] -= 1
                    mid[k] -= 1
                    mid = tuple(mid)
                    if min(mid) >= 0 and mod.basis.get(mid):
                        # G_{src_j} F_k^{mid} G_mid^{-1} (F_j^{mid})^T G_{src_k}
                        block = (
                            mod.gram[src_j]
                            * mod.lower[(k, mid)]
                            * mod.gram_inv[mid]
                            * mod.lower[(j, mid)].transpose()
                            * mod.gram[src_k]
                        )
                    if j == k:
                        block = block + mod.gram[src_j] * _q(_label(cm, lam, src_k, j))
                    for a in range(size_j):
                        for b in range(size_k):
                            C[offs[bj] + a, offs[bk] + b] = block[a, b]
            piv = _pivots(C)
            mod.candidates[w] = total
            if not piv:
                continue
            G = _submatrix(C, piv, piv)
            Ginv = G.inv()
            mod.basis[w] = [cands[p] for p in piv]
            mod.gram[w] = G
            mod.gram_inv[w] = Ginv
            # f_j on W_{src}: coordinates of candidates (j, b) in the chosen basis
            for bj, (j, src, size) in enumerate(blocks):
                cols = list(range(offs[bj], offs[bj] + size))
                mod.lower[(j, src)] = Ginv * _submatrix(C, piv, cols)
            new_layer.append(w)
        # tau on the finished layer
        for w in new_layer:
            ww = mod.act(w)
            if ww not in mod.basis:
                raise AssertionError("automorphism does not preserve the weight support")
            T = _zeros(len(mod.basis[ww]), len(mod.basis[w]))
            for col, (j, b) in enumerate(mod.basis[w]):
                src = list(w)
                src[j] -= 1
                src = tuple(src)
                wj = aut(j)
                img_src = mod.act(src)
                vec = mod.lower[(wj, img_src)] * _column(mod.tau[src], b)
                for r in range(vec.nrows()):
                    T[r, col] = vec[r, 0]
            mod.tau[w] = T
        log.debug("oracle layer %d: %d weights", h, len(new_layer))
        layer = new_layer
    # f_k into spaces beyond the computed range are never used
    return mod


def _column(m: flint.fmpq_mat, c: int) -> flint.fmpq_mat:
    out = flint.fmpq_mat(m.nrows(), 1)
    for r in range(m.nrows()):
        out[r, 0] = m[r, c]
    return out


# ---------------------------------------------------------------------------
# twining tables


@dataclass(frozen=True)
class TwiningTable:
    algebra: CartanMatrix
    automorphism: DiagramAutomorphism
    highest_weight: WeightCoords
    depth: int | None
    entries: dict  # n-vector -> Cyclotomic
    max_grade: Fraction | None = None

    def __getitem__(self, n):
        return self.entries.get(tuple(n), Cyclotomic(self.automorphism.order, [0]))

    def nonzero(self) -> dict:
        return {n: v for n, v in self.entries.items() if not v.is_zero()}

    def weight(self, n) -> WeightCoords:
        return MultiplicityTable(self.algebra, self.highest_weight, self.depth, {}).weight(n)

    def to_json(self) -> dict:
        rows = []
        for n in sorted(self.nonzero(), key=lambda v: (sum(v), v)):
            rows.append({"n": list(n), "weight": self.weight(n).to_json(), "trace": self.entries[n].to_json()})
        return {
            "highest_weight": self.highest_weight.to_json(),
            "order": self.automorphism.order,
            "depth": self.depth,
            "entries": rows,
        }


def twining_character_oracle(module: OracleModule) -> TwiningTable:
    N = module.automorphism.order
    entries = {}
    for n, T in module.tau.items():
        if module.act(n) == n:
            entries[n] = Cyclotomic(N, [_trace(T)])
        else:
            entries[n] = Cyclotomic(N, [0])
    return TwiningTable(
        module.algebra, module.automorphism, module.highest_weight, module.depth, entries, module.max_grade
    )


def oracle_checks(module: OracleModule) -> dict:
    """tau^N = 1, twining property on f_j and e_j, ranks."""
    aut = module.automorphism
    N = aut.order
    report = {"tau_order": True, "twining_f": True, "twining_e": True}
    for n, T in module.tau.items():
        # tau^N along the orbit of n
        acc = T
        cur = module.act(n)
        for _ in range(N - 1):
            acc = module.tau[cur] * acc
            cur = module.act(cur)
        if acc != _identity(T.ncols()):
            report["tau_order"] = False
        for j in range(module.algebra.n):
            up = list(n)
            up[j] += 1
            up = tuple(up)
            if up in module.tau and (j, n) in module.lower:
                lhs = module.tau[up] * module.lower[(j, n)]
                rhs = module.lower[(aut(j), module.act(n))] * T
                if lhs != rhs:
                    report["twining_f"] = False
            E = module.raise_op(j, n)
            if E is not None:
                down = list(n)
                down[j] -= 1
                down = tuple(down)
                E2 = module.raise_op(aut(j), module.act(n))
                if module.tau[down] * E != E2 * T:
                    report["twining_e"] = False
    report["ok"] = all(report.values())
    return report


def eigenvalue_split(module: OracleModule, n: Vec) -> dict[int, int]:
    """Dimensions of the zeta^k eigenspaces of tau on a symmetric weight space.

    tau is rational with tau^N = 1, so each primitive d-th root of unity
    (d | N) occurs with the same multiplicity m_d and the kernel of
    Phi_d(tau) has dimension phi(d) m_d.
    """
    n = tuple(n)
    T = module.tau[n]
    if module.act(n) != n:
        raise NotSymmetricWeight("eigenvalues only defined on symmetric weights")
    N = module.automorphism.order
    dim = T.nrows()
    out = {}
    for d in range(1, N + 1):
        if N % d:
            continue
        phi = flint.fmpz_poly.cyclotomic(d).coeffs()
        acc = _zeros(dim, dim)
        P = _identity(dim)
        for c in phi:
            acc = acc + P * int(c)
            P = P * T
        kern = dim - acc.rank()
        deg = len(phi) - 1
        m_d = kern // deg
        for k in range(N):
            if (N // _gcd(N, k)) == d:
                out[k] = m_d
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def twining_character_via_orbit(
    fr: FoldResult,
    hw: WeightCoords | Sequence,
    depth: int,
    max_grade=None,
    verma: bool = False,
) -> TwiningTable:
    """Ordinary character of the orbit algebra, lifted to g-weights."""
    if not isinstance(hw, WeightCoords):
        hw = WeightCoords.of(hw)
    od = fr.orbit_data
    if not is_symmetric(od, hw.labels):
        raise NotSymmetricWeight("highest weight is not symmetric")
    f = fr.folded
    hw_f = project_weight(fr, hw)
    # folded depth: a folded root of height h lifts to height >= h
    f_max = None
    if max_grade is not None:
        f_max = max_grade
    if verma:
        tab = verma_multiplicities(f, hw_f, depth=depth, max_grade=f_max)
    else:
        tab = irreducible_multiplicities(f, hw_f, depth=depth, max_grade=f_max)
    entries = {}
    N = fr.N
    capped = _capped_nodes(fr.source, fr.automorphism, max_grade)
    for nf, m in tab.items():
        n = lift_root_coeffs(fr, nf)
        if sum(n) > depth or any(n[i] > c for i, c in capped):
            continue
        entries[n] = Cyclotomic(N, [m])
    return TwiningTable(fr.source, fr.automorphism, hw, depth, entries, Fraction(max_grade) if max_grade is not None else None)


def ordinary_table(cm: CartanMatrix, hw, depth: int, max_grade=None, verma: bool = False) -> MultiplicityTable:
    if verma:
        return verma_multiplicities(cm, hw, depth=depth, max_grade=max_grade)
    return irreducible_multiplicities(cm, hw, depth=depth, max_grade=max_grade)


def compare_tables(a: TwiningTable, b: TwiningTable) -> list:
    """Entrywise differences (exact); empty means equal."""
    diff = []
    zero = Cyclotomic(1, [0])
    for n in sorted(set(a.entries) | set(b.entries)):
        x = a.entries.get(n, zero)
        y = b.entries.get(n, zero)
        if x != y:
            diff.append({"n": list(n), "oracle": x.to_json(), "orbit": y.to_json()})
    return diff


def property_report(tw: TwiningTable, ordinary: MultiplicityTable, fr: FoldResult | None = None) -> dict:
    """Support on symmetric weights, majorization |m^w| <= m, w_hat-orbit constancy."""
    aut = tw.automorphism
    support = all(tuple(aut.act_labels(n)) == n for n, v in tw.entries.items() if not v.is_zero())
    major = all(abs(complex(v)) <= ordinary[n] + 1e-12 for n, v in tw.entries.items())
    at_hw = tw[tuple([0] * tw.algebra.n)] == 1
    const = True
    checked = 0
    if fr is not None:
        from .weyl import hat_reflection

        cm = tw.algebra
        hw = tw.highest_weight
        index = {}
        for n in tw.entries:
            w = tw.weight(n)
            index[w.labels, w.grade] = n
        for n, v in tw.entries.items():
            lam = tw.weight(n)
            for k in range(fr.folded.n):
                mu = hat_reflection(fr, lam, k)
                m = index.get((mu.labels, mu.grade))
                if m is None:
                    continue
                checked += 1
                if tw.entries[m] != v:
                    const = False
    return {
        "support_symmetric": support,
        "majorized": major,
        "hw_entry_one": at_hw,
        "hat_orbit_constant": const,
        "hat_pairs_checked": checked,
        "ok": support and major and at_hw and const,
    }


# ---------------------------------------------------------------------------
# A_{N-1}^(1) rotations


def is_rotation(cm: CartanMatrix, aut: DiagramAutomorphism) -> bool:
    """Cyclic rotation of the affine A_{N-1} cycle generating the full Z_N."""
    n = cm.n
    if cm.kind is not Kind.AFFINE or aut.order != n or n < 2:
        return False
    # A_{n-1}^(1): every node has exactly two neighbours (or n = 2 with -2 links)
    if n == 2:
        return cm.as_lists() == [[2, -2], [-2, 2]]
    for i in range(n):
        nb = [j for j in range(n) if j != i and cm[i, j] != 0]
        if len(nb) != 2 or any(cm[i, j] != -1 for j in nb):
            return False
    return True


def twining_rotation_special_case(
    cm: CartanMatrix,
    aut: DiagramAutomorphism,
    hw: WeightCoords | Sequence,
    order: int,
    t: Fraction = Fraction(0),
    modified: bool = False,
) -> QSeries:
    """Single-term twining character for a full rotation of A_{N-1}^(1)."""
    from .affine import AffineWeightSet

    if not isinstance(hw, WeightCoords):
        hw = WeightCoords.of(hw)
    if not is_rotation(cm, aut):
        raise NotRotation("automorphism is not a full rotation of an affine A-type diagram")
    if tuple(aut.act_labels(hw.labels)) != hw.labels:
        raise NotSymmetricWeight("highest weight is not symmetric")
    k = cm.level(hw)
    ws = AffineWeightSet(cm, int(k))
    delta = ws.conformal_weight(hw)
    exponent = delta - ws.central_charge / 24 if modified else delta
    # e^{2 pi i t k}: a root of unity when t is rational
    t = Fraction(t)
    phase_arg = t * k
    den = phase_arg.denominator
    phase = Cyclotomic.zeta(den, phase_arg.numerator % den) if den > 1 else Cyclotomic(1, [1])
    return QSeries.make(exponent, [phase], order)
