"""Affine data: integrable weights at a level, conformal weights, central
charges, Kac-Peterson modular matrices, simple currents and monodromy charges,
and the conformal-weight relation between an affine algebra and its orbit
algebra."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .cartan import CartanMatrix, Kind, WeightCoords, dimension_finite, validate_cartan
from .errors import NotSymmetricWeight, UnsupportedAlgebra, WeightNotAtLevel
from .fold import DiagramAutomorphism, FoldResult, is_symmetric, project_weight, validate_automorphism
from .weyl import apply_word, finite_weyl_orbit, longest_word


def _require_affine(cm: CartanMatrix) -> None:
    if cm.kind is not Kind.AFFINE:
        raise UnsupportedAlgebra("affine Cartan matrix required")


def horizontal_nodes(cm: CartanMatrix) -> list[int]:
    return [i for i in range(cm.n) if i != cm.zero_node]


def horizontal_algebra(cm: CartanMatrix) -> CartanMatrix:
    """Finite algebra on the non-distinguished nodes, keeping the affine normalization."""
    nodes = horizontal_nodes(cm)
    rows = [[cm.entries[i][j] for j in nodes] for i in nodes]
    return validate_cartan(rows, norms=[cm.norms[i] for i in nodes])


def level_weights(cm: CartanMatrix, level) -> list[WeightCoords]:
    """All dominant integral weights of the given level, in decreasing
    lexicographic order of the labels (so k Lambda_0 comes first when the
    distinguished node is 0)."""
    level = Fraction(level)
    av = cm.dual_kac
    n = cm.n
    out = []

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                out.append(tuple(acc))
            return
        m = 0
        while m * av[i] <= left:
            rec(i + 1, left - m * av[i], acc + [Fraction(m)])
            m += 1

    rec(0, level, [])
    return [WeightCoords(t) for t in sorted(out, reverse=True)]


@dataclass
class AffineWeightSet:
    algebra: CartanMatrix
    level: Fraction
    automorphism: DiagramAutomorphism | None = None

    def __post_init__(self):
        _require_affine(self.algebra)
        self.level = Fraction(self.level)
        if self.level < 0:
            raise ValueError("level must be nonnegative")

    @cached_property
    def weights(self) -> list[WeightCoords]:
        return level_weights(self.algebra, self.level)

    @property
    def g_dual(self) -> Fraction:
        return self.algebra.dual_coxeter

    @cached_property
    def horizontal(self) -> CartanMatrix:
        return horizontal_algebra(self.algebra)

    @cached_property
    def dimension(self) -> int:
        return dimension_finite(self.horizontal)

    @property
    def central_charge(self) -> Fraction:
        return self.level * self.dimension / (self.level + self.g_dual)

    @cached_property
    def gamma00(self) -> Fraction | None:
        if self.automorphism is None:
            return None
        return gamma00(self.algebra, self.automorphism)

    def _check(self, lam: WeightCoords) -> None:
        if lam.n != self.algebra.n or self.algebra.level(lam) != self.level:
            raise WeightNotAtLevel(f"weight {[str(x) for x in lam.labels]} is not at level {self.level}")

    def conformal_weight(self, lam: WeightCoords | Sequence) -> Fraction:
        """(Lambda|Lambda + 2 rho) / (2 (k + g))."""
        if not isinstance(lam, WeightCoords):
            lam = WeightCoords.of(lam)
        self._check(lam)
        lam = WeightCoords(lam.labels)
        cm = self.algebra
        two_rho = cm.rho().scale(2)
        return cm.inner(lam, lam + two_rho) / (2 * (self.level + self.g_dual))

    def modular_anomaly(self, lam) -> Fraction:
        return self.conformal_weight(lam) - self.central_charge / 24

    def vacuum(self) -> WeightCoords:
        z = self.algebra.zero_node
        labels = [Fraction(0)] * self.algebra.n
        labels[z] = self.level / self.algebra.dual_kac[z]
        return WeightCoords(tuple(labels))

    def to_json(self) -> dict:
        return {
            "level": str(self.level),
            "g_dual": str(self.g_dual),
            "central_charge": str(self.central_charge),
            "weights": [[str(x) for x in w.labels] for w in self.weights],
            "conformal_weights": [str(self.conformal_weight(w)) for w in self.weights],
        }


def conformal_weight(ws: AffineWeightSet, lam) -> Fraction:
    return ws.conformal_weight(lam)


def modular_anomaly(ws: AffineWeightSet, lam) -> Fraction:
    return ws.modular_anomaly(lam)


# ---------------------------------------------------------------------------
# modular data


@dataclass
class ModularData:
    labels: list
    S: np.ndarray
    T: np.ndarray
    central_charge: Fraction
    exponents: list = field(default_factory=list)  # exact Delta - c/24 per label

    def to_json(self) -> dict:
        return {
            "labels": [lab if isinstance(lab, (str, int)) else [str(x) for x in lab] for lab in self.labels],
            "S": [[[float(z.real), float(z.imag)] for z in row] for row in self.S],
            "T": [[float(z.real), float(z.imag)] for z in self.T],
            "central_charge": str(self.central_charge),
            "exponents": [str(e) for e in self.exponents],
        }


def _phase(x: Fraction) -> complex:
    x = x % 1
    return cmath.exp(2j * math.pi * float(x))


def kac_peterson(ws: AffineWeightSet) -> ModularData:
    """S_{lam,mu} = i^{|D+|} ((k+g)^r |P/Q^v|)^{-1/2} sum_w eps(w) e^{-2 pi i (w(lam+rho)|mu+rho)/(k+g)}."""
    cm = ws.algebra
    hor = ws.horizontal
    nodes = horizontal_nodes(cm)
    r = hor.n
    kg = ws.level + ws.g_dual
    npos = (ws.dimension - r) // 2
    # (alpha_i^v | alpha_j^v) = A_ij / E_i
    coroot_gram = [[Fraction(hor.entries[i][j]) / hor.norms[i] for j in range(r)] for i in range(r)]
    vol = abs(linalg.det(coroot_gram))
    pref = (1j) ** npos / math.sqrt(float(kg) ** r * float(vol))

    shifted = [WeightCoords(tuple(w.labels[i] + 1 for i in nodes)) for w in ws.weights]
    orbits = [finite_weyl_orbit(hor, lam) for lam in shifted]
    m = len(shifted)
    S = np.zeros((m, m), dtype=complex)
    for a in range(m):
        for b in range(m):
            total = 0j
            for img, sign in orbits[a]:
                x = hor.inner(img, shifted[b]) / kg
                total += sign * _phase(-x)
            S[a, b] = pref * total
    exps = [ws.modular_anomaly(w) for w in ws.weights]
    T = np.array([_phase(e) for e in exps])
    return ModularData([w.labels for w in ws.weights], S, T, ws.central_charge, exps)


def modular_checks(md: ModularData, tol: float = 1e-9) -> dict:
    S, T = md.S, np.diag(md.T)
    n = S.shape[0]
    I = np.eye(n)
    sym = float(np.max(np.abs(S - S.T))) if n else 0.0
    uni = float(np.max(np.abs(S @ S.conj().T - I))) if n else 0.0
    S2 = S @ S
    perm_dev = float(np.max(np.abs(S2 - np.round(S2.real)))) if n else 0.0
    rounded = np.round(S2.real)
    is_perm = bool(
        n == 0
        or (
            np.all((rounded == 0) | (rounded == 1))
            and np.all(rounded.sum(axis=0) == 1)
            and np.all(rounded.sum(axis=1) == 1)
            and np.allclose(rounded, rounded.T)
        )
    )
    ST = S @ T
    st3 = float(np.max(np.abs(ST @ ST @ ST - S2))) if n else 0.0
    residuals = {"symmetry": sym, "unitarity": uni, "s2_permutation": perm_dev, "st_cubed": st3}
    return {
        "residuals": residuals,
        "s2_is_permutation": is_perm,
        "tolerance": tol,
        "ok": is_perm and all(v < tol for v in residuals.values()),
    }


# ---------------------------------------------------------------------------
# simple currents


@dataclass(frozen=True)
class SimpleCurrent:
    node: int
    automorphism: DiagramAutomorphism

    def act(self, lam: WeightCoords) -> WeightCoords:
        return WeightCoords(tuple(self.automorphism.act_labels(lam.labels)))

    def weight(self, level) -> WeightCoords:
        n = len(self.automorphism.perm)
        labels = [Fraction(0)] * n
        labels[self.node] = Fraction(level)
        return WeightCoords(tuple(labels))

    def to_json(self) -> dict:
        return {"node": self.node, "perm": list(self.automorphism.perm)}


def cominimal_nodes(cm: CartanMatrix) -> list[int]:
    _require_affine(cm)
    return [i for i in range(cm.n) if i != cm.zero_node and cm.kac[i] == 1]


def _current_perm(cm: CartanMatrix, j: int) -> tuple[int, ...]:
    """Node permutation of J = k Lambda_j acting by lam -> k Lambda_j + w0^(j) w0 lam."""
    nodes = horizontal_nodes(cm)
    hor = horizontal_algebra(cm)
    pos = {a: b for b, a in enumerate(nodes)}
    w0 = longest_word(hor)
    w0j = longest_word(hor, [pos[x] for x in nodes if x != j])
    perm = [None] * cm.n
    for i in range(cm.n):
        k = cm.dual_kac[i]
        lbar = [Fraction(0)] * hor.n
        if i != cm.zero_node:
            lbar[pos[i]] = Fraction(1)
        img = apply_word(hor, w0j, apply_word(hor, w0, WeightCoords(tuple(lbar))))
        labels = list(img.labels)
        labels[pos[j]] += k
        full = [Fraction(0)] * cm.n
        for a, b in pos.items():
            full[a] = labels[b]
        full[cm.zero_node] = (k - sum(cm.dual_kac[x] * full[x] for x in nodes)) / cm.dual_kac[cm.zero_node]
        hits = [x for x in range(cm.n) if full[x] != 0]
        if len(hits) != 1 or full[hits[0]] != 1:
            raise AssertionError(f"current action does not permute fundamental weights: {full}")
        perm[i] = hits[0]
    return tuple(perm)


def simple_currents(cm: CartanMatrix) -> list[SimpleCurrent]:
    """Identity plus one current per cominimal node."""
    _require_affine(cm)
    if cm.name is None:
        raise UnsupportedAlgebra("simple currents need a catalog algebra")
    out = [SimpleCurrent(cm.zero_node, validate_automorphism(cm, tuple(range(cm.n))))]
    for j in cominimal_nodes(cm):
        out.append(SimpleCurrent(j, validate_automorphism(cm, _current_perm(cm, j))))
    return out


def monodromy_charge(ws: AffineWeightSet, J: SimpleCurrent, lam) -> Fraction:
    """Q_J(lam) = Delta_lam + Delta_J - Delta_{J lam} mod 1."""
    if not isinstance(lam, WeightCoords):
        lam = WeightCoords.of(lam)
    q = ws.conformal_weight(lam) + ws.conformal_weight(J.weight(ws.level)) - ws.conformal_weight(J.act(lam))
    return q % 1


# ---------------------------------------------------------------------------
# orbit algebra relations


def gamma00(cm: CartanMatrix, aut: DiagramAutomorphism) -> Fraction:
    """sum_{l,l'=1}^{N-1} (Lambda_bar_{w^l 0} | Lambda_bar_{w^l' 0}) over the horizontal algebra."""
    _require_affine(cm)
    hor = horizontal_algebra(cm)
    nodes = horizontal_nodes(cm)
    pos = {a: b for b, a in enumerate(nodes)}
    z = cm.zero_node

    def fw(i):
        labels = [Fraction(0)] * hor.n
        if i != z:
            labels[pos[i]] = Fraction(1)
        return WeightCoords(tuple(labels))

    imgs = [fw(aut.power(l)[z]) for l in range(1, aut.order)]
    return sum((hor.inner(a, b) for a in imgs for b in imgs), Fraction(0))


def folded_dimension(fr: FoldResult) -> int:
    return dimension_finite(horizontal_algebra(fr.folded))


def check_cd2(fr: FoldResult, lam: WeightCoords | Sequence) -> dict:
    """Delta_lam = Delta_fold + Gamma00 k (1 + g/(k+g)) / (2 N^2), and the (c, D) form."""
    if not isinstance(lam, WeightCoords):
        lam = WeightCoords.of(lam)
    if not is_symmetric(fr.orbit_data, lam.labels):
        raise NotSymmetricWeight("cd2 relation needs a symmetric weight")
    g, f, N = fr.source, fr.folded, fr.N
    k = g.level(lam)
    ws = AffineWeightSet(g, k, fr.automorphism)
    lam_f = project_weight(fr, WeightCoords(lam.labels))
    lam_f = WeightCoords(lam_f.labels)
    ws_f = AffineWeightSet(f, f.level(lam_f))
    delta = ws.conformal_weight(lam)
    delta_f = ws_f.conformal_weight(lam_f)
    G = ws.gamma00
    gd = ws.g_dual
    const = G * k * (1 + gd / (k + gd)) / (2 * N * N)
    D, Df = ws.dimension, ws_f.dimension
    const_cd = ((k / gd) * (D - Df) + ws.central_charge - ws_f.central_charge) / 24
    return {
        "level": str(k),
        "folded_level": str(ws_f.level),
        "delta": str(delta),
        "delta_folded": str(delta_f),
        "gamma00": str(G),
        "constant": str(const),
        "constant_cD": str(const_cd),
        "lhs": delta,
        "rhs": delta_f + const,
        "equal": delta == delta_f + const,
        "equal_cD": delta == delta_f + const_cd,
    }
