"""Acceptance criteria, one test each, at the tolerances fixed in oscperiod.checks.

Each result line is echoed in the terminal summary (see conftest.py).
"""

import time

import pytest

from oscperiod import checks

RESULTS = []


@pytest.mark.parametrize("check", checks.CHECKS, ids=lambda c: c.__name__.removeprefix("check_"))
def test_criterion(check):
    result = check()
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.line()


def test_suite_runtime():
    start = time.perf_counter()
    checks.run_all()
    assert time.perf_counter() - start < 120
