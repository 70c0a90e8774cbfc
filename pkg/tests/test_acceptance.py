"""Acceptance criteria, run at their stated tolerances.

Each test prints a single ``[PASS]``/``[FAIL]`` line.  The lines are also
collected and repeated in the terminal summary so they are visible without
``-s``.
"""
import pytest

from cuspidal.verify import DEFAULT_SAMPLES, DEFAULT_SEED, SUITES, run_suite

ACCEPTANCE_LINES: list = []


@pytest.mark.parametrize("number", sorted(SUITES))
def test_criterion(number):
    result = run_suite(number, DEFAULT_SAMPLES, DEFAULT_SEED)
    line = result.line()
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    assert result.passed, line
