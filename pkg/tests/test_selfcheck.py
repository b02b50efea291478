"""The built-in oracle suite must pass on the shipped library and must
report injected failures instead of hiding them."""

from __future__ import annotations

import pytest

from logsod.monoids import is_sharp, is_simplicial
from logsod.selfcheck import (
    DEFAULT_CHECKS,
    MONOID_FIXTURES,
    CheckResult,
    SelfcheckReport,
    run_selfcheck,
)

EXPECTED_NAMES = [
    "factorial-chain",
    "extremal-rays",
    "kummer-minimality",
    "partition-identity",
    "tower-embedding",
    "twist-count",
]


class TestDefaultSuite:
    def test_all_checks_pass_at_default_level(self):
        report = run_selfcheck()
        assert report.level == 4
        assert report.passed
        assert [r.name for r in report.results] == EXPECTED_NAMES
        assert all(r.passed for r in report.results)
        assert all(r.counterexamples == () for r in report.results)

    def test_passes_at_low_level(self):
        assert run_selfcheck(1).passed

    def test_level_validation(self):
        with pytest.raises(ValueError):
            run_selfcheck(0)

    def test_fixture_library_shape(self):
        assert len(MONOID_FIXTURES) >= 10
        names = [name for name, _ in MONOID_FIXTURES]
        assert len(set(names)) == len(names)
        for _, m in MONOID_FIXTURES:
            assert m.ambient_rank <= 3
            assert is_sharp(m)
            assert is_simplicial(m)

    def test_default_check_list(self):
        assert [name for name, _ in DEFAULT_CHECKS] == EXPECTED_NAMES


class TestReporting:
    def test_injected_failure_is_reported(self):
        def rigged(level):
            return CheckResult("rigged", False, "planted failure", ((level, 7),))

        report = run_selfcheck(2, checks=[("rigged", rigged)])
        assert not report.passed
        text = report.to_text()
        assert "FAIL rigged" in text
        assert "planted failure" in text
        assert "counterexample" in text
        assert "SELFCHECK FAILED" in text

    def test_mixed_results_keep_order(self):
        def ok(level):
            return CheckResult("ok-check", True, "fine")

        def bad(level):
            return CheckResult("bad-check", False, "broken")

        report = run_selfcheck(2, checks=[("ok-check", ok), ("bad-check", bad)])
        assert [r.passed for r in report.results] == [True, False]
        assert not report.passed

    def test_name_mismatch_is_corrected(self):
        def sloppy(level):
            return CheckResult("other", True, "fine")

        report = run_selfcheck(2, checks=[("canonical", sloppy)])
        assert report.results[0].name == "canonical"

    def test_json_shape(self):
        report = run_selfcheck(2, checks=[DEFAULT_CHECKS[0]])
        data = report.to_json()
        assert data["level"] == 2
        assert data["passed"] is True
        assert data["results"][0] == {
            "name": "factorial-chain",
            "passed": True,
            "detail": data["results"][0]["detail"],
            "counterexamples": [],
        }

    def test_text_states_all_passed(self):
        report = SelfcheckReport(3, (CheckResult("x", True, "fine"),))
        assert "all checks passed" in report.to_text()
