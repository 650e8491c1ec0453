"""Validation suites: each suite passes and serializes to the report schema."""

import json

import pytest

from numshadow import validate

# total-variation thresholds are calibrated for 1e6 samples; the purely
# z-score-based suites are exercised at a tenth of that for speed
FULL_N = {"prop3", "g3"}


@pytest.mark.parametrize("name", sorted(validate.SUITES))
def test_suite_passes(name):
    n = 1_000_000 if name in FULL_N else 100_000
    records, passed = validate.run_suite(name, seed=3, n=n)
    failing = [r.formula_id for r in records if not r.passed]
    assert passed, f"suite {name} failing checks: {failing}"
    assert records
    for r in records:
        obj = r.to_json()
        json.dumps(obj)
        assert set(obj) == {
            "formula_id", "inputs", "analytic", "mc_estimate",
            "mc_stderr", "z_score", "passed", "detail",
        }


def test_unknown_suite():
    with pytest.raises(KeyError, match="unknown suite"):
        validate.run_suite("nope")


def test_run_all_collects_every_suite():
    # smallest viable n just to check aggregation plumbing; pass/fail is
    # covered per-suite above
    records, _ = validate.run_suite("fastpath", seed=3, n=20_000)
    assert all(r.formula_id == "fastpath-ks" for r in records)
