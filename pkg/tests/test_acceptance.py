"""Acceptance grid: one test per criterion, each printing a single PASS/FAIL line."""
import pytest

from splitsplines.verify import CRITERIA, run_one


@pytest.mark.slow
@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_one(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, "\n".join(res.failures)
