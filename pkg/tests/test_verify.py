"""Tests for the registered property checks and the verify suite."""

import pytest

from aech_cli_transfunction.errors import ScenarioError
from aech_cli_transfunction.scenario import load_context
from aech_cli_transfunction.scenario.models import VerifyAnalysis
from aech_cli_transfunction.verify import CHECKS, run_suite


@pytest.fixture
def pack(fixtures_dir):
    return load_context(fixtures_dir / "default_pack.json")


def verify(**kwargs) -> VerifyAnalysis:
    return VerifyAnalysis(kind="verify", **kwargs)


def test_default_pack_passes(pack):
    report = run_suite(pack, verify(epsilon=0.5))
    failed = [(c.name, c.subject, c.detail) for c in report.checks if not c.passed]
    assert failed == []
    assert report.passed
    assert report.failures == 0
    subjects = {(c.name, c.subject) for c in report.checks}
    assert ("graph_carries", "graph_H/H") in subjects
    assert ("graph_carries", "band/C") in subjects
    assert ("markov_roundtrip", "T") in subjects
    assert ("popdyn_mass", "popdyn") in subjects


def test_every_registered_check_runs_on_the_default_pack(pack):
    report = run_suite(pack, verify(epsilon=0.5))
    assert {c.name for c in report.checks} == set(CHECKS)


def test_descriptive_checks_report_without_failing(pack):
    report = run_suite(pack, verify(subjects=["half"], checks=["norm_preserving"]))
    [result] = report.checks
    assert not result.observed
    assert result.passed


def test_declared_expectations_are_compared(pack):
    report = run_suite(pack, verify(subjects=["C"], checks=["norm_preserving"], expect={"norm_preserving": False}))
    [result] = report.checks
    assert result.observed
    assert result.expected_flag is False
    assert not result.passed
    assert report.failures == 1


def test_check_filter(pack):
    report = run_suite(pack, verify(checks=["null_space"]))
    assert {c.name for c in report.checks} == {"null_space"}
    assert {c.subject for c in report.checks} == set(pack.transfunctions)


def test_unknown_check(pack):
    with pytest.raises(ScenarioError, match="unknown checks: wobble"):
        run_suite(pack, verify(checks=["wobble"]))


def test_rank_one_is_expected_non_local(fixtures_dir):
    ctx = load_context(fixtures_dir / "rank_one_nonlocal.json")
    analysis = ctx.scenario.analyses[1]
    report = run_suite(ctx, analysis)
    assert report.passed
    [localized] = [c for c in report.checks if c.name == "localized"]
    assert localized.observed is False
    assert localized.expected_flag is False
    assert "non-local" in localized.detail


def test_broken_markov_fails_with_a_witness(fixtures_dir):
    ctx = load_context(fixtures_dir / "broken_markov.json")
    report = run_suite(ctx)
    assert not report.passed
    [result] = [c for c in report.checks if c.name == "markov_roundtrip"]
    assert not result.passed
    assert "row y=0" in result.detail


def test_markov_fixture_passes(fixtures_dir):
    ctx = load_context(fixtures_dir / "markov_roundtrip.json")
    report = run_suite(ctx, seed=3, trials=50)
    assert report.passed
    assert report.seed == 3 and report.trials == 50


def test_semicontinuity_check_runs_on_every_transfunction(pack):
    report = run_suite(pack, verify(checks=["e_upper_semicontinuous"]))
    assert report.passed
    assert {c.subject for c in report.checks} == set(pack.transfunctions)
    [heaviside] = [c for c in report.checks if c.subject == "H"]
    assert heaviside.detail == "21 points, max E 0.5"
