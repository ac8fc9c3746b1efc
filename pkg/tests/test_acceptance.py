"""Acceptance gate: every criterion runs at its stated tolerance and prints
one pass/fail line.  Slow entries (the oracle ensemble and the exact
diagonalization) dominate the runtime of this module.
"""

import pytest

from negent import acceptance


@pytest.mark.parametrize(
    "criterion",
    acceptance.ALL_CRITERIA,
    ids=[f"criterion_{fn.index}" for fn in acceptance.ALL_CRITERIA],
)
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print()
        print(result.line())
    assert result.passed, result.line()
