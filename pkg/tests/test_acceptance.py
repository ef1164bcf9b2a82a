"""Acceptance gate: one test per verification check, at its stated tolerance.

The full verification suite runs once for the module; each test then prints
the corresponding pass/fail line and asserts the check's verdict, so
``pytest tests/test_acceptance.py -v`` yields one line per guarantee and a
failure pinpoints exactly which guarantee broke.

Two trend checks fail on purpose and are left as plain failures: at fixed
vibrational intensity the coherence and two-qubit-coherence half-times are
*not* monotone in the cavity intensity.  The measured orderings are
reproduced independently by the brute-force oracle, so weakening the bound
would hide real physics; see the README's verification section for the
analysis.
"""
from __future__ import annotations

import pytest

from vibqubit.verify import run_all

EXPECTED_CHECKS = (
    "oracle-equivalence-single",
    "printed-coefficient-falsification",
    "map-trace-consistency",
    "two-qubit-map-validation",
    "exact-anchors",
    "qualitative-coherence-half-time",
    "qualitative-concurrence-extinction",
    "qualitative-tqc-half-time",
    "qualitative-correlation-floor",
    "stationary-revival-timing",
    "density-invariants",
)


@pytest.fixture(scope="module")
def results():
    """Run the whole verification suite once and index results by name."""
    checks = run_all()
    return {r.name: r for r in checks}


def _report(results, name):
    result = results[name]
    print(result.line())
    return result


def test_suite_runs_every_check_exactly_once(results):
    assert sorted(results) == sorted(EXPECTED_CHECKS)
    assert len(results) == len(EXPECTED_CHECKS)


def test_oracle_equivalence_single_qubit(results):
    result = _report(results, "oracle-equivalence-single")
    assert result.passed, result.line()
    assert result.seconds < 120.0, f"took {result.seconds:.1f}s, budget 120s"


def test_printed_coefficient_falsification(results):
    result = _report(results, "printed-coefficient-falsification")
    assert result.passed, result.line()


def test_map_trace_consistency(results):
    result = _report(results, "map-trace-consistency")
    assert result.passed, result.line()


def test_two_qubit_map_matches_joint_oracle(results):
    result = _report(results, "two-qubit-map-validation")
    assert result.passed, result.line()
    assert result.seconds < 300.0, f"took {result.seconds:.1f}s, budget 300s"


def test_exact_anchor_values(results):
    result = _report(results, "exact-anchors")
    assert result.passed, result.line()


def test_coherence_half_time_trend(results):
    result = _report(results, "qualitative-coherence-half-time")
    assert result.passed, result.line()


def test_concurrence_extinction_trend(results):
    result = _report(results, "qualitative-concurrence-extinction")
    assert result.passed, result.line()


def test_two_qubit_coherence_half_time_trend(results):
    result = _report(results, "qualitative-tqc-half-time")
    assert result.passed, result.line()


def test_late_time_correlation_floor(results):
    result = _report(results, "qualitative-correlation-floor")
    assert result.passed, result.line()


def test_stationary_revival_timing(results):
    result = _report(results, "stationary-revival-timing")
    assert result.passed, result.line()


def test_density_invariants_across_all_checks(results):
    result = _report(results, "density-invariants")
    assert result.passed, result.line()
