"""Acceptance battery: one test per documented validation criterion.

The full battery runs once per session (several of the checks simulate or
fit on large samples); each criterion then reports its own pass/fail line
with the measured values at the stated tolerance.

Known-red criteria
------------------
Four checks measure quantities whose reference values or tolerances are not
attainable by the implemented laws, and they are expected to fail honestly
rather than be loosened:

* C2b  -- the tabulated crypto kurtosis (9.74634) differs from the exact
          cumulant-ratio value (9.74407...) by 2.3e-3, beyond the 2e-3 window.
* C5   -- the leading-order small/large-x asymptotic forms of the SD Levy
          density carry next-order corrections above 1% at the probe points.
* C7a  -- at the tested sample sizes, sampling error in skewness/kurtosis
          exceeds the 10% band far more often than the allowed 10% of seeds.
* C7b  -- the sample-mean criterion (3% relative) implies a tighter-than-
          attainable SE at n=5000 for these parameter sets.

Everything else must be green.
"""

import pytest

from gtsou import ALL_CHECK_IDS, run_all


@pytest.fixture(scope="module")
def results():
    return {r.check_id: r for r in run_all()}


@pytest.mark.parametrize("check_id", ALL_CHECK_IDS)
def test_criterion(results, check_id):
    r = results[check_id]
    assert r.passed, f"{check_id} failed ({r.seconds:.1f}s): {r.detail}"
