"""The nine acceptance criteria, one test each; prints a pass/fail line per criterion."""

import pytest

from orbitfold import checks

LIMITS = {1: 1, 2: 300, 3: 120, 4: 10, 5: 5, 6: 5, 7: 30, 8: 120, 9: 300}


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    rep = getattr(checks, f"criterion_{number}")()
    rep["criterion"] = number
    with capsys.disabled():
        print("\n" + checks.summary_line(rep))
    assert rep["ok"], rep
    assert rep["seconds"] < LIMITS[number]
