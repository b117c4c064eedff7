"""Acceptance criteria 1-11, one test and one printed pass/fail line each."""
import pytest

from maniforge import acceptance
from maniforge.acceptance import CRITERIA, run_criterion

RESULTS = {}


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys):
    result = run_criterion(number)
    RESULTS[number] = result
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.measured


def test_suite_report_lists_every_criterion():
    report, results = acceptance.acceptance_suite([9, 10])
    d = report.to_dict()
    assert set(d["results"]) == {"09", "10", "all_passed"}
    assert d["results"]["all_passed"] is True


def test_tampered_toroid_breaks_table_check(monkeypatch):
    original = acceptance.toroid_44
    monkeypatch.setattr(acceptance, "toroid_44", lambda a, b: original(a + 1, b))
    ok, measured = acceptance.criterion_1()
    assert not ok and measured["two_hat_iso_toroid_4_4"] is False


def test_summary_line_format():
    r = acceptance.CriterionResult(3, "x", True, {}, 1.234)
    assert r.line() == "[PASS] criterion  3: x (1.23s)"
