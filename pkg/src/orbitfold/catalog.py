"""Named Cartan matrices.

Node numbering (0-based). Finite algebras follow Bourbaki with every index
shifted down by one::

    A_n   0 - 1 - ... - (n-1)
    B_n   0 - 1 - ... - (n-2) => (n-1)        node n-1 short
    C_n   0 - 1 - ... - (n-2) <= (n-1)        node n-1 long
    D_n   0 - 1 - ... - (n-3) - (n-2)
                          \\ - (n-1)           nodes n-2, n-1 attached to n-3
    G_2   0 <= 1                                node 0 short
    F_4   0 - 1 => 2 - 3                        nodes 2, 3 short
    E_6   0 - 2 - 3 - 4 - 5,  1 - 3
    E_7   0 - 2 - 3 - 4 - 5 - 6,  1 - 3
    E_8   0 - 2 - 3 - 4 - 5 - 6 - 7,  1 - 3

The untwisted affine algebra ``X_n^(1)`` (name ``"Xnaff"``) puts the extra
node first: index 0 is alpha_0 and index i is Bourbaki alpha_i. Examples:
``A3aff`` is the 4-cycle 0-1-2-3-0, ``D4aff`` has center node 2 joined to
0, 1, 3, 4.

Matrices use the convention ``A[i][j] = 2 (alpha_i|alpha_j)/(alpha_j|alpha_j)``
so e.g. ``B2 = [[2, -2], [-1, 2]]``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .cartan import CartanMatrix, affinize, validate_cartan
from .errors import UnsupportedAlgebra

_NAME = re.compile(r"^([A-G])(\d+)(aff)?$")


def _from_form(form: list[list[Fraction]]) -> list[list[int]]:
    n = len(form)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = 2 * Fraction(form[i][j]) / Fraction(form[j][j])
            assert v.denominator == 1
            rows[i][j] = int(v)
    return rows


def _chain_form(lengths: list[Fraction], links: list[tuple[int, int, Fraction]]) -> list[list[Fraction]]:
    n = len(lengths)
    form = [[Fraction(0)] * n for _ in range(n)]
    for i, l in enumerate(lengths):
        form[i][i] = Fraction(l)
    for i, j, v in links:
        form[i][j] = form[j][i] = Fraction(v)
    return form


def finite_form(series: str, rank: int) -> list[list[Fraction]]:
    one, half = Fraction(1), Fraction(1, 2)
    if series == "A" and rank >= 1:
        return _chain_form([2] * rank, [(i, i + 1, -one) for i in range(rank - 1)])
    if series == "B" and rank >= 2:
        return _chain_form([2] * (rank - 1) + [1], [(i, i + 1, -one) for i in range(rank - 1)])
    if series == "C" and rank >= 2:
        links = [(i, i + 1, -half) for i in range(rank - 2)] + [(rank - 2, rank - 1, -one)]
        return _chain_form([1] * (rank - 1) + [2], links)
    if series == "D" and rank >= 4:
        links = [(i, i + 1, -one) for i in range(rank - 2)] + [(rank - 3, rank - 1, -one)]
        return _chain_form([2] * rank, links)
    if series == "G" and rank == 2:
        return _chain_form([Fraction(2, 3), 2], [(0, 1, -one)])
    if series == "F" and rank == 4:
        return _chain_form([2, 2, 1, 1], [(0, 1, -one), (1, 2, -one), (2, 3, -half)])
    if series == "E" and rank in (6, 7, 8):
        links = [(0, 2, -one), (1, 3, -one)] + [(i, i + 1, -one) for i in range(2, rank - 1)]
        return _chain_form([2] * rank, links)
    raise UnsupportedAlgebra(f"no algebra {series}{rank}")


@lru_cache(maxsize=None)
def preset(name: str) -> CartanMatrix:
    m = _NAME.match(name)
    if not m:
        raise UnsupportedAlgebra(f"unknown algebra name {name!r}")
    series, rank, aff = m.group(1), int(m.group(2)), m.group(3)
    finite = validate_cartan(_from_form(finite_form(series, rank)), name=f"{series}{rank}")
    if aff:
        return affinize(finite, name=name)
    return finite


PRESET_NAMES = ("A1", "A2", "A3", "B2", "C2", "G2", "D4", "A1aff", "A2aff", "A3aff", "C2aff", "B3aff", "C4aff", "D4aff")


def load_algebra(spec: str) -> CartanMatrix:
    """Named preset, or path to a JSON file ``{"cartan": [[...]], "name": ...}``."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        data = json.loads(path.read_text())
        return algebra_from_json(data)
    return preset(spec)


def algebra_from_json(data: dict) -> CartanMatrix:
    """Inverse of ``CartanMatrix.to_json`` (also accepts documents wrapping it under "algebra")."""
    if "cartan" not in data and "algebra" in data:
        data = data["algebra"]
    norms = [Fraction(x) for x in data["norms"]] if "norms" in data else None
    dual_kac = [Fraction(x) for x in data["dual_kac"]] if "dual_kac" in data else None
    return validate_cartan(
        data["cartan"], name=data.get("name"), zero_node=int(data.get("zero_node", 0)), norms=norms, dual_kac=dual_kac
    )
