"""Acceptance gate: every numbered verification check must pass.

Each parametrized case runs one check with its frozen tolerances and
prints a single pass/fail line carrying the measured details.
"""

import pytest

from meyerkit import acceptance

RUNTIME_LIMITS = {1: 1.0, 2: 30.0, 3: 60.0, 4: 5.0, 5: 60.0, 6: 60.0,
                  7: 60.0, 8: 300.0, 9: 60.0, 10: 10.0, 11: 30.0}


@pytest.mark.parametrize("index", acceptance.CRITERION_INDICES)
def test_criterion(index):
    result = acceptance.run_one(index)
    status = "PASS" if result.passed else "FAIL"
    line = (f"criterion {result.index} ({result.name}): {status} "
            f"in {result.elapsed:.2f}s :: {result.details}")
    print(line)
    assert result.passed, line
    assert result.elapsed < RUNTIME_LIMITS[index], (
        f"criterion {index} took {result.elapsed:.2f}s, "
        f"limit {RUNTIME_LIMITS[index]:.0f}s")


def test_run_all_reports_every_criterion():
    results = acceptance.run_all([1, 10])
    assert [r.index for r in results] == [1, 10]
    assert all(r.passed for r in results)
