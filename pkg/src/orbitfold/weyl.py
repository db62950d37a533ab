"""Weyl groups as words in fundamental reflections, and the embedded
generators w_hat of the orbit algebra's Weyl group."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cartan import CartanMatrix, WeightCoords
from .errors import LinkingConditionViolated, StepBudgetExceeded
from .fold import FoldResult


@dataclass(frozen=True)
class WeylWord:
    """Product letters[0] letters[1] ... (rightmost acts first)."""

    letters: tuple[int, ...] = ()
    # number of w_hat generators when the word was built from them
    hat_letters: int | None = None

    @property
    def sign(self) -> int:
        return -1 if len(self.letters) % 2 else 1

    @property
    def hat_sign(self) -> int:
        if self.hat_letters is None:
            raise ValueError("hat sign only defined for words in the w_hat alphabet")
        return -1 if self.hat_letters % 2 else 1

    def __mul__(self, other: "WeylWord") -> "WeylWord":
        hat = None
        if self.hat_letters is not None and other.hat_letters is not None:
            hat = self.hat_letters + other.hat_letters
        return WeylWord(self.letters + other.letters, hat)

    def inverse(self) -> "WeylWord":
        return WeylWord(self.letters[::-1], self.hat_letters)


def reflect(cm: CartanMatrix, lam: WeightCoords, i: int) -> WeightCoords:
    """w_i(lam) = lam - lam^i alpha_i."""
    c = lam.labels[i]
    if c == 0:
        return lam
    return lam - cm.simple_root(i).scale(c)


def apply_word(cm: CartanMatrix, word: WeylWord | Sequence[int], lam: WeightCoords) -> WeightCoords:
    letters = word.letters if isinstance(word, WeylWord) else word
    for i in reversed(letters):
        lam = reflect(cm, lam, i)
    return lam


def hat_generator(fr: FoldResult, k: int) -> WeylWord:
    """Word in the reflections of g representing w_hat_[k]."""
    od = fr.orbit_data
    orb, s, ln = od.orbits[k], od.weights[k], od.lengths[k]
    if s == 1:
        return WeylWord(tuple(orb), 1)
    if s == 2 and ln == 2:
        i, j = orb
        return WeylWord((i, j, i), 1)
    raise LinkingConditionViolated(f"orbit {orb} has weight {s}")


def hat_reflection(fr: FoldResult, lam: WeightCoords, k: int) -> WeightCoords:
    return apply_word(fr.source, hat_generator(fr, k), lam)


def hat_reflection_formula(fr: FoldResult, lam: WeightCoords, k: int) -> WeightCoords:
    """lam - s_k sum_{i in orbit} lam^i alpha_i.

    Agrees with :func:`hat_reflection` on all weights when s_k = 1 and on
    symmetric weights when s_k = 2 (for A_2 the word w_1 w_2 w_1 is the
    reflection in alpha_1 + alpha_2, which differs off the symmetric locus).
    """
    od = fr.orbit_data
    out = lam
    for i in od.orbits[k]:
        out = out - fr.source.simple_root(i).scale(od.weights[k] * lam.labels[i])
    return out


def hat_word(fr: FoldResult, orbit_letters: Iterable[int]) -> WeylWord:
    word = WeylWord((), 0)
    for k in orbit_letters:
        word = word * hat_generator(fr, k)
    return word


def coxeter_exponent(cm: CartanMatrix, i: int, j: int) -> int | None:
    """Order of w_i w_j, or None for infinite order."""
    if i == j:
        return 1
    p = cm[i, j] * cm[j, i]
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(p)


def coxeter_relation_check(fr: FoldResult, samples: Sequence[WeightCoords]) -> dict:
    """Check (w_hat_i w_hat_j)^m = 1 with m read off from the folded matrix."""
    f = fr.folded
    report = {"checked": [], "infinite_order": [], "violations": []}
    for i in range(f.n):
        for j in range(i, f.n):
            m = coxeter_exponent(f, i, j)
            if m is None:
                report["infinite_order"].append([i, j])
                continue
            word = hat_word(fr, [i, j] * m if i != j else [i, i])
            bad = [lam for lam in samples if apply_word(fr.source, word, lam) != lam]
            report["checked"].append([i, j, m])
            if bad:
                report["violations"].append([i, j, m, len(bad)])
    report["ok"] = not report["violations"]
    return report


def to_dominant(cm: CartanMatrix, lam: WeightCoords, depth: int = 0, budget: int | None = None):
    """Reflect at negative labels until dominant.

    Returns (dominant weight, word) with ``apply_word(cm, word, lam)`` equal to
    the dominant weight.
    """
    if budget is None:
        budget = 10 * (depth + 1) * cm.n
    letters: list[int] = []
    while True:
        i = next((k for k, x in enumerate(lam.labels) if x < 0), None)
        if i is None:
            return lam, WeylWord(tuple(reversed(letters)))
        if len(letters) >= budget:
            raise StepBudgetExceeded(f"not dominant after {budget} reflections")
        lam = reflect(cm, lam, i)
        letters.append(i)


def longest_word(cm: CartanMatrix, nodes: Sequence[int] | None = None) -> WeylWord:
    """Longest element of the (finite) parabolic subgroup on ``nodes``."""
    nodes = list(range(cm.n)) if nodes is None else list(nodes)
    lam = WeightCoords(tuple(Fraction(-1 if k in nodes else 0) for k in range(cm.n)))
    letters: list[int] = []
    while True:
        i = next((k for k in nodes if lam.labels[k] < 0), None)
        if i is None:
            return WeylWord(tuple(reversed(letters)))
        lam = reflect(cm, lam, i)
        letters.append(i)


def finite_weyl_orbit(cm: CartanMatrix, lam: WeightCoords) -> list[tuple[WeightCoords, int]]:
    """Orbit of a regular weight with signs; for a regular dominant weight
    this enumerates the finite Weyl group."""
    seen = {lam: 1}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for i in range(cm.n):
                nu = reflect(cm, mu, i)
                if nu not in seen:
                    seen[nu] = -seen[mu]
                    nxt.append(nu)
        frontier = nxt
    return list(seen.items())
