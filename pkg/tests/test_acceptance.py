"""One test per acceptance criterion; each prints its pass/fail line.

Metric thresholds and runtime budgets are both part of a pass.  Criteria
that cannot be met are left failing rather than relaxed.
"""
import pytest

from supershift import acceptance


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, len(acceptance.CRITERIA) + 1))
def test_criterion(number, capsys):
    result = acceptance.run(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
