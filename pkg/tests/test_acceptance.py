"""Acceptance criteria, one test and one PASS/FAIL line each.

The lines are collected in RESULTS and printed in the terminal summary by
conftest.py, so they appear in a plain ``pytest -v`` run.
"""

import pytest

from flgauge.acceptance import CRITERIA, TOLERANCE, run_criterion

RESULTS = []


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA],
                         ids=[name.replace(" ", "-") for _, name, _ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    RESULTS.append(result.line())
    assert TOLERANCE == "exact"
    assert result.ok, result.detail
