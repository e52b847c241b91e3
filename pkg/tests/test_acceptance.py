"""The nine acceptance criteria, one test each; every run prints a pass/fail line."""
import pytest

from rigidacm.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA], ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number, seed=0)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.ok, res.detail
