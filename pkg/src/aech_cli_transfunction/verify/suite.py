"""Run the registered checks against every object of a scenario."""

import logging

from ..scenario import ScenarioContext
from ..scenario.models import GraphsAnalysis, VerifyAnalysis
from .models import CheckResult, SuiteReport
from .registry import CHECKS, CheckOptions, checks_for

logger = logging.getLogger(__name__)


def _result(check, subject_name: str, subject, opts: CheckOptions, expect: dict[str, bool]) -> CheckResult:
    observed, detail, flag = check.run(subject, opts)
    # Analytic flags only set expectations when they certify the property.
    expected = expect.get(check.name, True if flag is True else None)
    passed = observed == expected if expected is not None else observed or not check.required
    return CheckResult(
        name=check.name,
        subject=subject_name,
        observed=observed,
        expected_flag=expected,
        passed=passed,
        detail=detail,
    )


def run_suite(
    ctx: ScenarioContext,
    analysis: VerifyAnalysis | None = None,
    seed: int = 0,
    trials: int = 200,
    delta_min: float | None = None,
) -> SuiteReport:
    """Run every applicable registered check.

    A check passes when its observed outcome equals the declared expectation
    (from ``expect``), else the analytic flag of the subject, else when the
    property simply holds.
    """
    analysis = analysis or VerifyAnalysis(kind="verify")
    wanted = set(analysis.checks) if analysis.checks else set(CHECKS)
    unknown = wanted - set(CHECKS)
    if unknown:
        raise ctx.fail(f"unknown checks: {', '.join(sorted(unknown))}", sorted(unknown)[0])
    opts = CheckOptions(seed=seed, trials=trials, delta_min=delta_min, epsilon=analysis.epsilon)
    expect = analysis.expect
    results: list[CheckResult] = []

    subjects = analysis.subjects or list(ctx.transfunctions)
    for name in subjects:
        phi = ctx.transfunction(name)
        for check in checks_for("transfunction"):
            if check.name in wanted:
                results.append(_result(check, name, phi, opts, expect))

    for name, t in ctx.markov.items():
        for check in checks_for("markov"):
            if check.name in wanted:
                results.append(_result(check, name, t, opts, expect))

    if ctx.population is not None and ctx.scenario.popdyn is not None:
        spec = ctx.scenario.popdyn
        pop_opts = CheckOptions(
            seed=seed, trials=trials, steps=spec.steps, initial=ctx.measure(spec.initial)
        )
        for check in checks_for("popdyn"):
            if check.name in wanted:
                results.append(_result(check, "popdyn", ctx.population, pop_opts, expect))

    for graph_analysis in ctx.scenario.analyses:
        if not isinstance(graph_analysis, GraphsAnalysis):
            continue
        graph_opts = CheckOptions(transfunction=ctx.transfunction(graph_analysis.transfunction))
        graph_expect = {"graph_carries": graph_analysis.expect, **expect}
        for check in checks_for("graph"):
            if check.name in wanted:
                subject = f"{graph_analysis.graph}/{graph_analysis.transfunction}"
                results.append(_result(check, subject, ctx.graph(graph_analysis.graph), graph_opts, graph_expect))

    failures = sum(not r.passed for r in results)
    logger.debug("verify %s: %d checks, %d failures", ctx.scenario.name, len(results), failures)
    return SuiteReport(
        scenario=ctx.scenario.name,
        checks=results,
        passed=failures == 0,
        failures=failures,
        seed=seed,
        trials=trials,
    )
