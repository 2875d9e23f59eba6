"""
Tests for validation
"""

import numpy as np

from erasure_rate_kit.models import CheckResult, ValidationReport
from erasure_rate_kit.validation import (
    CHECKS,
    check_recursion,
    check_sandwich,
    format_report,
    run_validation,
)


def test_quick_suite_passes():
    report = run_validation("quick")

    assert report.level == "quick"
    assert [c.name for c in report.checks] == list(CHECKS)
    failed = [(c.name, c.max_deviation, c.tolerance) for c in report.checks if not c.passed]
    assert not failed
    assert report.passed


def test_quick_suite_is_reproducible():
    first = run_validation("quick")
    second = run_validation("quick")

    assert [c.max_deviation for c in first.checks] == [c.max_deviation for c in second.checks]


def test_zero_tolerance_scale_fails(monkeypatch):
    monkeypatch.setenv("ERK_VALIDATE_TOLERANCE_SCALE", "0")
    report = run_validation("quick")

    assert not report.passed
    assert all(c.tolerance == 0.0 for c in report.checks)
    assert not next(c for c in report.checks if c.name == "erasure_form_equivalence").passed


def test_sandwich_values_inside_bracket():
    deviation, tolerance, cases = check_sandwich("quick", np.random.default_rng(0))

    assert cases == 27
    assert deviation <= tolerance


def test_recursion_check_counts_cases():
    deviation, _, cases = check_recursion("quick", np.random.default_rng(1))

    assert cases == 5000
    assert deviation < 1e-10


def test_format_report():
    report = ValidationReport(
        level="quick",
        checks=[
            CheckResult(name="alpha", passed=True, max_deviation=1e-14, tolerance=1e-9, cases=3),
            CheckResult(name="beta_check", passed=False, max_deviation=1.0, tolerance=0.5, cases=1),
        ],
    )
    text = format_report(report)
    lines = text.splitlines()

    assert lines[0].startswith("check")
    assert "PASS" in lines[2]
    assert "FAIL" in lines[3]
    assert lines[-1] == "quick: FAILED beta_check"
    assert text.endswith("\n")


def test_format_report_all_passed():
    report = ValidationReport(
        level="full",
        checks=[CheckResult(name="a", passed=True, max_deviation=0.0, tolerance=1.0, cases=1)],
    )

    assert format_report(report).splitlines()[-1] == "full: all 1 checks passed"
