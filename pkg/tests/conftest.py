from fractions import Fraction

import pytest

from orbitfold.catalog import preset
from orbitfold.fold import fold, validate_automorphism


def F(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.fixture(scope="session")
def folds():
    """Folding fixtures keyed by a short name."""
    table = {
        "A3_flip": ("A3", (2, 1, 0)),
        "D4_cycle": ("D4", (2, 1, 3, 0)),
        "A2_flip": ("A2", (1, 0)),
        "A3aff_half": ("A3aff", (2, 3, 0, 1)),
        "C4aff_current": ("C4aff", (4, 3, 2, 1, 0)),
    }
    out = {}
    for key, (name, perm) in table.items():
        cm = preset(name)
        out[key] = fold(cm, validate_automorphism(cm, perm))
    return out
