"""One test per acceptance criterion; each prints a PASS/FAIL line.

The lines are also collected and shown in the terminal summary.  Run this
file directly (``python tests/test_acceptance.py``) for the bare report.
"""

import pytest

from prime_borcherds.verify import CRITERIA, report, run_acceptance

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # executed as a script
    ACCEPTANCE_LINES = []


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA],
                         ids=[f"c{c[0]:02d}-{c[1].split()[0]}" for c in CRITERIA])
def test_criterion(number):
    (result,) = run_acceptance({number})
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    print(report(run_acceptance()))
