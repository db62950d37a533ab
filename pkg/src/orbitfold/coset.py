"""Diagonal cosets (h + h)/h: branching functions, field identification,
fixed point resolution and the modular data of the resolved theory.

Branching functions come from decomposing the product of the two factor
characters grade by grade. Twining branching functions of fixed points use
either the single-term rotation formula (full rotations of affine A-type
diagrams) or the branching functions of the folded coset.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Sequence

import numpy as np

from .affine import AffineWeightSet, ModularData, SimpleCurrent, horizontal_nodes, kac_peterson, simple_currents
from .cartan import CartanMatrix, Kind, WeightCoords
from .catalog import preset
from .characters import grade_of, irreducible_multiplicities
from .cyclotomic import Cyclotomic
from .errors import (
    DepthInsufficient,
    LinkingConditionViolated,
    NegativeMultiplicity,
    NonIntegralResolution,
    NotFixedPoint,
    UnsupportedAlgebra,
)
from .fold import DiagramAutomorphism, FoldResult, fold, lift_weight, project_weight
from .qseries import QSeries
from .twining import is_rotation

Triple = tuple  # (labels1, labels2, labels') as tuples of Fractions

DEFAULT_QORDER = 6


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ORBITFOLD_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# coset data


@dataclass
class CosetSpec:
    h: CartanMatrix  # finite simple
    levels: tuple[int, int]
    algebra: CartanMatrix  # untwisted affinization of h

    @property
    def k_prime(self) -> int:
        return self.levels[0] + self.levels[1]

    @cached_property
    def factors(self) -> tuple[AffineWeightSet, AffineWeightSet, AffineWeightSet]:
        k1, k2 = self.levels
        return (AffineWeightSet(self.algebra, k1), AffineWeightSet(self.algebra, k2), AffineWeightSet(self.algebra, k1 + k2))

    @property
    def central_charge(self) -> Fraction:
        a, b, c = self.factors
        return a.central_charge + b.central_charge - c.central_charge

    def triples(self) -> list[Triple]:
        a, b, c = self.factors
        return [(x.labels, y.labels, z.labels) for x in a.weights for y in b.weights for z in c.weights]

    def vacuum(self) -> Triple:
        return tuple(ws.vacuum().labels for ws in self.factors)

    def anomaly(self, t: Triple) -> Fraction:
        """s1 + s2 - s' : leading exponent of the branching function (up to integers)."""
        a, b, c = self.factors
        return a.modular_anomaly(t[0]) + b.modular_anomaly(t[1]) - c.modular_anomaly(t[2])

    def to_json(self) -> dict:
        return {
            "h": self.h.name,
            "levels": list(self.levels),
            "k_prime": self.k_prime,
            "central_charge": str(self.central_charge),
            "factors": [ws.to_json() for ws in self.factors],
        }


def build_coset(h: CartanMatrix | str, k1: int, k2: int) -> CosetSpec:
    if isinstance(h, str):
        h = preset(h)
    if h.kind is not Kind.FINITE or h.name is None:
        raise UnsupportedAlgebra("diagonal cosets need a finite simple catalog algebra")
    if int(k1) != k1 or int(k2) != k2 or k1 < 1 or k2 < 1:
        raise UnsupportedAlgebra("levels must be positive integers")
    return CosetSpec(h, (int(k1), int(k2)), preset(h.name + "aff"))


# ---------------------------------------------------------------------------
# graded weight systems and branching functions

Graded = dict  # (horizontal labels, depth) -> multiplicity


def _rho_height(spec_alg: CartanMatrix, hlabels: Sequence) -> Fraction:
    """(mu | rho) for the horizontal part; strictly increasing along positive roots."""
    nodes = horizontal_nodes(spec_alg)
    full = [Fraction(0)] * spec_alg.n
    for x, i in zip(hlabels, nodes):
        full[i] = Fraction(x)
    rho_bar = [Fraction(0) if i == spec_alg.zero_node else Fraction(1) for i in range(spec_alg.n)]
    return spec_alg.inner(WeightCoords(tuple(full)), WeightCoords(tuple(rho_bar)))


def _horizontal(cm: CartanMatrix, labels: Sequence) -> tuple[int, ...]:
    return tuple(int(labels[i]) for i in horizontal_nodes(cm))


def graded_weights(cm: CartanMatrix, hw: Sequence, order: int) -> Graded:
    """Weights of L(hw) by (horizontal labels, depth) with depth < order."""
    table = irreducible_multiplicities(cm, WeightCoords.of(hw), max_grade=order - 1)
    out: Graded = {}
    for n, m in table.items():
        d = grade_of(cm, n)
        if d >= order:
            continue
        key = (_horizontal(cm, table.weight(n).labels), int(d))
        out[key] = out.get(key, 0) + m
    return out


def twined_graded_weights(fr: FoldResult, hw: Sequence, order: int) -> Graded:
    """Twining character of L(hw) as lifted folded weights, by (horizontal labels, depth)."""
    g = fr.source
    top = WeightCoords.of(hw)
    small = project_weight(fr, top)
    table = irreducible_multiplicities(fr.folded, WeightCoords(small.labels), max_grade=order)
    top_grade = lift_weight(fr, WeightCoords(small.labels)).grade
    out: Graded = {}
    for n, m in table.items():
        up = lift_weight(fr, table.weight(n))
        d = top_grade - up.grade
        if d.denominator != 1:
            raise ValueError("lifted weight at non-integral depth")
        if d >= order:
            continue
        key = (_horizontal(g, up.labels), int(d))
        out[key] = out.get(key, 0) + m
    return out


def _convolve(a: Graded, b: Graded, order: int) -> Graded:
    out: Graded = {}
    for (la, da), ma in a.items():
        for (lb, db), mb in b.items():
            d = da + db
            if d >= order:
                continue
            key = (tuple(x + y for x, y in zip(la, lb)), d)
            out[key] = out.get(key, 0) + ma * mb
    return out


def _decompose(cm: CartanMatrix, product: Graded, level: int, order: int, chars, signed: bool) -> dict:
    """Strip level-``level`` characters from ``product``; returns hw labels -> coefficient list.

    ``chars(labels)`` gives the graded weight system of the module to strip.
    The highest remaining weight (smallest depth, largest rho-height) is always
    a highest weight of a summand.
    """
    rest = {k: v for k, v in product.items() if v != 0}
    out: dict = {}
    av = [cm.dual_kac[i] for i in horizontal_nodes(cm)]
    z = cm.zero_node
    while rest:
        key = min(rest, key=lambda k: (k[1], -_rho_height(cm, k[0]), k[0]))
        hl, d = key
        c = rest[key]
        lz = (Fraction(level) - sum(a * x for a, x in zip(av, hl))) / cm.dual_kac[z]
        if min(hl, default=0) < 0 or lz < 0 or lz.denominator != 1:
            raise NegativeMultiplicity(f"top weight {hl} at depth {d} is not dominant at level {level}")
        if c < 0 and not signed:
            raise NegativeMultiplicity(f"negative branching coefficient {c} at {hl}, depth {d}")
        full = [Fraction(0)] * cm.n
        for x, i in zip(hl, horizontal_nodes(cm)):
            full[i] = Fraction(x)
        full[z] = lz
        lab = tuple(full)
        coeffs = out.setdefault(lab, [0] * order)
        coeffs[d] += c
        for (wl, wd), m in chars(lab).items():
            if wd + d >= order:
                continue
            k2 = (wl, wd + d)
            v = rest.get(k2, 0) - c * m
            if v == 0:
                rest.pop(k2, None)
            else:
                rest[k2] = v
    return out


class BranchingEngine:
    """Caches graded weight systems so many triples share the factor work."""

    def __init__(self, spec: CosetSpec, order: int):
        self.spec = spec
        self.order = order
        self._cache: dict = {}
        self._folds: dict = {}

    def _graded(self, labels) -> Graded:
        key = ("plain", tuple(labels))
        if key not in self._cache:
            self._cache[key] = graded_weights(self.spec.algebra, labels, self.order)
        return self._cache[key]

    @lru_cache(maxsize=None)
    def _decomposition(self, l1, l2) -> dict:
        prod = _convolve(self._graded(l1), self._graded(l2), self.order)
        return _decompose(self.spec.algebra, prod, self.spec.k_prime, self.order, self._graded, signed=False)

    def branching(self, t: Triple) -> QSeries:
        dec = self._decomposition(tuple(t[0]), tuple(t[1]))
        coeffs = dec.get(tuple(t[2]), [0] * self.order)
        return QSeries.make(self.spec.anomaly(t), coeffs, self.order)

    # ---- twined --------------------------------------------------------
    def folding(self, aut: DiagramAutomorphism) -> FoldResult:
        if aut.perm not in self._folds:
            self._folds[aut.perm] = fold(self.spec.algebra, aut)
        return self._folds[aut.perm]

    def _twined(self, fr: FoldResult, labels) -> Graded:
        key = ("twined", fr.automorphism.perm, tuple(labels))
        if key not in self._cache:
            self._cache[key] = twined_graded_weights(fr, labels, self.order)
        return self._cache[key]

    def folded_branching(self, t: Triple, aut: DiagramAutomorphism) -> QSeries:
        fr = self.folding(aut)
        prod = _convolve(self._twined(fr, t[0]), self._twined(fr, t[1]), self.order)
        dec = _decompose(self.spec.algebra, prod, self.spec.k_prime, self.order, lambda lab: self._twined(fr, lab), signed=True)
        for lab in dec:
            if tuple(aut.act_labels(lab)) != tuple(lab):
                raise NegativeMultiplicity(f"non-symmetric summand {lab} in a twined decomposition")
        coeffs = dec.get(tuple(t[2]), [0] * self.order)
        return QSeries.make(self.spec.anomaly(t), coeffs, self.order)


def branching_functions(spec: CosetSpec, q_order: int = DEFAULT_QORDER, triples=None, engine=None) -> dict:
    if q_order < 1:
        raise DepthInsufficient("q_order must be positive")
    engine = engine or BranchingEngine(spec, q_order)
    if engine.order < q_order:
        raise DepthInsufficient("engine truncation below requested q_order")
    triples = spec.triples() if triples is None else triples
    pairs = sorted({(t[0], t[1]) for t in triples})
    _pmap(lambda p: engine._decomposition(*p), pairs)
    return {t: engine.branching(t).truncate(q_order) for t in triples}


# ---------------------------------------------------------------------------
# identification group


@dataclass(frozen=True)
class IdentificationCurrent:
    """(J; J') acting by the same node permutation on all three factors."""

    current: SimpleCurrent

    @property
    def perm(self) -> tuple[int, ...]:
        return self.current.automorphism.perm

    @property
    def automorphism(self) -> DiagramAutomorphism:
        return self.current.automorphism

    def is_identity(self) -> bool:
        return self.current.automorphism.is_identity()

    def act(self, t: Triple) -> Triple:
        aut = self.current.automorphism
        return tuple(tuple(aut.act_labels(x)) for x in t)

    def to_json(self) -> dict:
        return self.current.to_json()


@dataclass
class IdentificationGroup:
    elements: list[IdentificationCurrent]

    def __len__(self):
        return len(self.elements)

    def index(self, perm) -> int:
        for i, e in enumerate(self.elements):
            if e.perm == tuple(perm):
                return i
        raise KeyError(perm)

    def compose(self, i: int, j: int) -> int:
        a, b = self.elements[i].perm, self.elements[j].perm
        return self.index(tuple(a[b[x]] for x in range(len(a))))

    def charge(self, spec: CosetSpec, g: int, t: Triple) -> Fraction:
        """Monodromy charge of (J; J') on the triple; zero for allowed fields."""
        J = self.elements[g].current
        q = Fraction(0)
        for sign, ws, lam in zip((1, 1, -1), spec.factors, t):
            lam = WeightCoords(lam)
            q += sign * (ws.conformal_weight(lam) + ws.conformal_weight(J.weight(ws.level)) - ws.conformal_weight(J.act(lam)))
        return q % 1

    def to_json(self) -> dict:
        return {"order": len(self), "elements": [e.to_json() for e in self.elements]}


def identification_group(spec: CosetSpec) -> IdentificationGroup:
    group = IdentificationGroup([IdentificationCurrent(c) for c in simple_currents(spec.algebra)])
    # closure and abelianness
    for i in range(len(group)):
        for j in range(len(group)):
            if group.compose(i, j) != group.compose(j, i):
                raise AssertionError("identification group is not abelian")
    return group


# ---------------------------------------------------------------------------
# orbits, stabilizers and their characters


@dataclass
class StabilizerCharacter:
    """Psi: stabilizer -> roots of unity, Psi(g) = zeta_conductor^values[g]."""

    conductor: int
    values: dict  # group element index -> exponent

    def __call__(self, g: int) -> Cyclotomic:
        if g not in self.values:
            return Cyclotomic(1, [0])
        return Cyclotomic.zeta(self.conductor, self.values[g])

    def is_trivial(self) -> bool:
        return all(v % self.conductor == 0 for v in self.values.values())

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "values": {str(k): v for k, v in sorted(self.values.items())}}


def _element_order(group: IdentificationGroup, g: int) -> int:
    e = group.index(tuple(range(len(group.elements[g].perm))))
    k, x = 1, g
    while x != e:
        x = group.compose(x, g)
        k += 1
    return k


def stabilizer_characters(group: IdentificationGroup, stab: Sequence[int]) -> list[StabilizerCharacter]:
    """All characters of an abelian subgroup, by brute force on a generating set."""
    stab = sorted(stab)
    e = group.index(tuple(range(len(group.elements[stab[0]].perm))))
    orders = {g: _element_order(group, g) for g in stab}
    exp = lcm(*orders.values())
    gens: list[int] = []
    span = {e}
    for g in sorted(stab, key=lambda x: (-orders[x], x)):
        if g in span:
            continue
        gens.append(g)
        new = set(span)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            y = group.compose(x, g)
            if y not in new:
                new.add(y)
                frontier.append(y)
        span = new

    def extend(assign):
        vals = {e: 0}
        frontier = [e]
        while frontier:
            x = frontier.pop()
            for g, a in zip(gens, assign):
                y = group.compose(x, g)
                v = (vals[x] + a) % exp
                if y in vals:
                    if vals[y] != v:
                        return None
                else:
                    vals[y] = v
                    frontier.append(y)
        return vals

    chars = []
    seen = set()

    def rec(i, acc):
        if i == len(gens):
            vals = extend(acc)
            if vals is not None:
                key = tuple(sorted(vals.items()))
                if key not in seen:
                    seen.add(key)
                    chars.append(StabilizerCharacter(exp, vals))
            return
        step = exp // orders[gens[i]]
        for a in range(orders[gens[i]]):
            rec(i + 1, acc + [a * step])

    rec(0, [])
    if len(chars) != len(stab):
        raise AssertionError("character count differs from stabilizer order")
    return chars


@dataclass
class FieldOrbit:
    representative: Triple
    members: list
    stabilizer: list  # group element indices
    resolved_labels: list = field(default_factory=list)

    @property
    def is_fixed_point(self) -> bool:
        return len(self.stabilizer) > 1

    def to_json(self) -> dict:
        return {
            "representative": [[str(x) for x in lab] for lab in self.representative],
            "members": [[[str(x) for x in lab] for lab in m] for m in self.members],
            "stabilizer": list(self.stabilizer),
            "characters": [c.to_json() for c in self.resolved_labels],
        }


def _lex(t: Triple):
    return tuple(x for lab in t for x in lab)


def selection_and_orbits(spec: CosetSpec, group: IdentificationGroup) -> list[FieldOrbit]:
    allowed = [t for t in spec.triples() if all(group.charge(spec, g, t) == 0 for g in range(len(group)))]
    left = set(allowed)
    orbits = []
    for t in sorted(allowed, key=_lex):
        if t not in left:
            continue
        members = {e.act(t) for e in group.elements}
        left -= members
        stab = [g for g, e in enumerate(group.elements) if e.act(t) == t]
        if len(members) * len(stab) != len(group):
            raise AssertionError("orbit-stabilizer relation fails")
        orb = FieldOrbit(min(members, key=_lex), sorted(members, key=_lex), stab)
        orb.resolved_labels = stabilizer_characters(group, stab)
        orbits.append(orb)
    # vacuum orbit first, the rest by representative
    vac = spec.vacuum()
    orbits.sort(key=lambda o: (vac not in o.members, _lex(o.representative)))
    return orbits


# ---------------------------------------------------------------------------
# twining branching functions and resolution


def twining_branching(spec: CosetSpec, fixed_point: Triple, omega: IdentificationCurrent, q_order: int = DEFAULT_QORDER, engine=None) -> QSeries:
    if omega.act(fixed_point) != tuple(tuple(x) for x in fixed_point):
        raise NotFixedPoint("triple is not fixed by the automorphism")
    engine = engine or BranchingEngine(spec, q_order)
    if omega.is_identity():
        return engine.branching(fixed_point).truncate(q_order)
    aut = omega.automorphism
    if is_rotation(spec.algebra, aut):
        # each twined factor character is a single power of q with coefficient 1
        return QSeries.make(spec.anomaly(fixed_point), [1], q_order)
    try:
        return engine.folded_branching(fixed_point, aut).truncate(q_order)
    except LinkingConditionViolated:
        raise


@dataclass
class ResolvedField:
    orbit: FieldOrbit
    psi: StabilizerCharacter
    character: QSeries

    @property
    def leading_exponent(self) -> Fraction:
        return self.character.normalized().leading

    def to_json(self, cc: Fraction) -> dict:
        return {
            "representative": [[str(x) for x in lab] for lab in self.orbit.representative],
            "psi": self.psi.to_json(),
            "character": self.character.to_json(),
            "leading_exponent": str(self.leading_exponent),
            "conformal_weight": str(self.leading_exponent + cc / 24),
        }


@dataclass
class ResolvedSpectrum:
    spec: CosetSpec
    group: IdentificationGroup
    orbits: list[FieldOrbit]
    fields: list[ResolvedField]
    branching: dict  # representative -> QSeries
    twining: dict  # (representative, group index) -> QSeries
    modular: ModularData | None = None

    def to_json(self) -> dict:
        out = {
            "coset": self.spec.to_json(),
            "identification_group": self.group.to_json(),
            "orbits": [o.to_json() for o in self.orbits],
            "fields": [f.to_json(self.spec.central_charge) for f in self.fields],
        }
        if self.modular is not None:
            out["modular"] = self.modular.to_json()
        return out


def _as_integer(c) -> int | None:
    if isinstance(c, Cyclotomic):
        if not c.is_rational():
            return None
        c = c.to_rational()
    c = Fraction(c)
    return int(c) if c.denominator == 1 else None


def resolve(spec: CosetSpec, orbits: list[FieldOrbit], q_order: int = DEFAULT_QORDER, group=None, engine=None) -> ResolvedSpectrum:
    group = group or identification_group(spec)
    engine = engine or BranchingEngine(spec, q_order)
    branching = branching_functions(spec, q_order, [o.representative for o in orbits], engine)
    twining: dict = {}
    fields = []
    for o in orbits:
        t = o.representative
        for g in o.stabilizer:
            twining[(t, g)] = twining_branching(spec, t, group.elements[g], q_order, engine)
        for psi in o.resolved_labels:
            total = None
            for g in o.stabilizer:
                term = twining[(t, g)].scale(psi(g).conjugate())
                total = term if total is None else total + term
            total = total.scale(Fraction(1, len(o.stabilizer)))
            coeffs = []
            for c in total.coeffs:
                v = _as_integer(c)
                if v is None or v < 0:
                    raise NonIntegralResolution(f"resolved character of {t} has coefficient {c}")
                coeffs.append(v)
            fields.append(ResolvedField(o, psi, QSeries(total.leading, tuple(coeffs), total.order)))
    return ResolvedSpectrum(spec, group, orbits, fields, branching, twining)


# ---------------------------------------------------------------------------
# modular data of the resolved theory


def _factor_S(spec: CosetSpec):
    out = []
    for ws in spec.factors:
        md = kac_peterson(ws)
        out.append((md.S, {tuple(lab): i for i, lab in enumerate(md.labels)}))
    return out


def identity_block(spec: CosetSpec, a: Triple, b: Triple, factors=None) -> complex:
    """S1 S2 conj(S') at the given triples."""
    factors = factors or _factor_S(spec)
    val = 1 + 0j
    for k, ((S, idx), x, y) in enumerate(zip(factors, a, b)):
        s = S[idx[tuple(x)], idx[tuple(y)]]
        val *= s.conjugate() if k == 2 else s
    return val


def _folded_S(spec: CosetSpec, fr: FoldResult, a: Triple, b: Triple) -> complex:
    val = 1 + 0j
    for k, (x, y) in enumerate(zip(a, b)):
        xs = project_weight(fr, WeightCoords(x)).labels
        ys = project_weight(fr, WeightCoords(y)).labels
        ws = AffineWeightSet(fr.folded, fr.folded.level(xs))
        md = kac_peterson(ws)
        idx = {tuple(lab): i for i, lab in enumerate(md.labels)}
        s = md.S[idx[tuple(xs)], idx[tuple(ys)]]
        val *= s.conjugate() if k == 2 else s
    return val


def twined_block(spec: CosetSpec, g: IdentificationCurrent, a: Triple, b: Triple, factors=None, engine=None) -> complex:
    """S^[omega] between two fixed points of omega."""
    if g.is_identity():
        return identity_block(spec, a, b, factors)
    if is_rotation(spec.algebra, g.automorphism):
        # one-dimensional twined sector on every level
        return 1 + 0j
    fr = engine.folding(g.automorphism) if engine else fold(spec.algebra, g.automorphism)
    return _folded_S(spec, fr, a, b)


def resolved_modular(spec: CosetSpec, orbits: list[FieldOrbit], group: IdentificationGroup | None = None, engine=None) -> ModularData:
    group = group or identification_group(spec)
    factors = _factor_S(spec)
    labels = [(o, psi) for o in orbits for psi in o.resolved_labels]
    n = len(labels)
    G = len(group)
    S = np.zeros((n, n), dtype=complex)
    blocks: dict = {}
    for i, (oa, pa) in enumerate(labels):
        for j, (ob, pb) in enumerate(labels):
            common = sorted(set(oa.stabilizer) & set(ob.stabilizer))
            total = 0j
            for g in common:
                key = (oa.representative, ob.representative, g)
                if key not in blocks:
                    blocks[key] = twined_block(spec, group.elements[g], oa.representative, ob.representative, factors, engine)
                total += complex(pa(g).conjugate()) * blocks[key] * complex(pb(g))
            S[i, j] = G / (len(oa.stabilizer) * len(ob.stabilizer)) * total
    exps = [spec.anomaly(o.representative) for o, _ in labels]
    T = np.array([np.exp(2j * np.pi * float(e % 1)) for e in exps])
    names = [f"{_name(o.representative)}|psi{k}" for o in orbits for k in range(len(o.resolved_labels))]
    return ModularData(names, S, T, spec.central_charge, exps)


def _name(t: Triple) -> str:
    return ";".join(",".join(str(x) for x in lab) for lab in t)


def prime_case_check(spec: CosetSpec, orbits, md: ModularData, group=None, engine=None, tol: float = 1e-9) -> dict:
    """For a Z_N identification group with N prime: compare fixed-point blocks with
    (1/N) S^[id] + (delta_kl - 1/N) S^[f]."""
    group = group or identification_group(spec)
    N = len(group)
    factors = _factor_S(spec)
    offsets, pos = {}, 0
    for o in orbits:
        offsets[id(o)] = pos
        pos += len(o.resolved_labels)
    worst = 0.0
    count = 0
    fixed = [o for o in orbits if len(o.stabilizer) == N]
    gen = next((g for g in range(N) if not group.elements[g].is_identity()), None)
    for oa in fixed:
        for ob in fixed:
            s_id = identity_block(spec, oa.representative, ob.representative, factors)
            s_f = twined_block(spec, group.elements[gen], oa.representative, ob.representative, factors, engine)
            for k, pa in enumerate(oa.resolved_labels):
                for l, pb in enumerate(ob.resolved_labels):
                    # characters are labelled so that Psi_k(gen) = zeta^k
                    kk = _psi_index(pa, gen, N)
                    ll = _psi_index(pb, gen, N)
                    expect = s_id / N + ((1 if kk == ll else 0) - 1 / N) * s_f
                    got = md.S[offsets[id(oa)] + k, offsets[id(ob)] + l]
                    worst = max(worst, abs(expect - got))
                    count += 1
    return {"entries": count, "max_deviation": worst, "ok": count > 0 and worst < tol}


def _psi_index(psi: StabilizerCharacter, gen: int, N: int) -> int:
    return (psi.values[gen] * N // psi.conductor) % N


# ---------------------------------------------------------------------------
# Verlinde


def verlinde_check(md: ModularData, vacuum: int = 0, tol: float = 1e-6) -> dict:
    S = md.S
    n = S.shape[0]
    s0 = S[vacuum]
    N = np.einsum("im,jm,km->ijk", S, S, (S.conj() / s0[None, :]))
    rounded = np.rint(N.real).astype(int)
    dev = float(np.max(np.abs(N - rounded))) if n else 0.0
    nonneg = bool(np.all(rounded >= 0))
    return {
        "fusion": rounded.tolist(),
        "max_deviation": dev,
        "nonnegative": nonneg,
        "integral": dev < tol,
        "ok": nonneg and dev < tol,
        "tolerance": tol,
    }


def vacuum_count(spec: CosetSpec, fields: list[ResolvedField]) -> int:
    """sum over fields of |coefficient at q^{-c/24}|^2."""
    target = -spec.central_charge / 24
    total = 0
    for f in fields:
        d = target - f.character.leading
        if d.denominator == 1 and 0 <= d < f.character.order:
            total += f.character.coeffs[int(d)] ** 2
    return total


def orbit_constancy(spec: CosetSpec, orbits: list[FieldOrbit], q_order: int = 3, engine=None) -> bool:
    engine = engine or BranchingEngine(spec, q_order)
    for o in orbits:
        ref = engine.branching(o.representative).truncate(q_order)
        for m in o.members:
            if engine.branching(m).truncate(q_order) != ref:
                return False
    return True


def solve_coset(h, k1: int, k2: int, q_order: int = DEFAULT_QORDER, modular: bool = True) -> ResolvedSpectrum:
    spec = build_coset(h, k1, k2)
    group = identification_group(spec)
    orbits = selection_and_orbits(spec, group)
    engine = BranchingEngine(spec, q_order)
    res = resolve(spec, orbits, q_order, group, engine)
    res._engine = engine
    if modular:
        res.modular = resolved_modular(spec, orbits, group, engine)
    return res
