"""Execute scenario analyses and write their reports."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from pydantic import BaseModel, Field

from .approximation import (
    check_abs_continuity,
    check_mollified,
    mollify,
    nonuniform_approx,
    recover_zero_localized,
    sigma_simple_approx,
    verify_pushforward_equal,
)
from .errors import LocalizationError, ScenarioError
from .graphs import carries
from .localization import check_uniform, estimate_D_eps, estimate_E
from .markov import markov_suite, metric_cost, mk_cost, plan_from_markov, read_cost_csv
from .measures import Measure
from .popdyn import simulate
from .scenario import ScenarioContext
from .scenario.models import (
    ApproxAnalysis,
    GraphsAnalysis,
    LocalizeAnalysis,
    MarkovAnalysis,
    PopdynAnalysis,
    VerifyAnalysis,
)
from .utils import write_csv, write_json
from .verify import run_suite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunOptions:
    """Run-time knobs shared by every analysis."""

    out: Path
    seed: int = 0
    trials: int = 200
    delta_min: float | None = None


class AnalysisOutcome(BaseModel):
    """What one analysis produced."""

    kind: str
    label: str
    files: list[str] = Field(default_factory=list)
    counterexample: bool = Field(default=False, description="A property failed or a construction was refused")
    message: str = ""
    summary: dict[str, Any] = Field(default_factory=dict)


def _localize(ctx: ScenarioContext, a: LocalizeAnalysis, label: str, opts: RunOptions) -> AnalysisOutcome:
    phi = ctx.transfunction(a.transfunction)
    delta_min = opts.delta_min or a.delta_min
    report = estimate_E(phi, delta_min, a.epsilon)
    files = [
        write_json(report, opts.out, f"{label}_localization"),
        write_csv(report.to_frame(), opts.out, f"{label}_localization"),
    ]
    summary: dict[str, Any] = {
        "max_e": report.max_e,
        "non_local_points": sum(p.non_local for p in report.points),
        "probe_based_lower_bound": report.probe_based_lower_bound,
    }
    counterexample = False
    if a.epsilon is not None:
        d_report = estimate_D_eps(phi, a.epsilon, delta_min)
        files.append(write_csv(d_report.to_frame(), opts.out, f"{label}_d_eps"))
        summary["uniform_delta"] = report.uniform.delta if report.uniform else None
        counterexample = report.uniform is None
    return AnalysisOutcome(
        kind="localize",
        label=label,
        files=[str(f) for f in files],
        counterexample=counterexample,
        message=f"max E estimate {report.max_e:.6g}",
        summary=summary,
    )


def _approx(ctx: ScenarioContext, a: ApproxAnalysis, label: str, opts: RunOptions) -> AnalysisOutcome:
    phi = ctx.transfunction(a.transfunction)
    delta_min = opts.delta_min or a.delta_min
    if a.method != "recover" and a.epsilon is None:
        raise ctx.fail(f"{a.method} approximation needs an epsilon", a.transfunction)

    summary: dict[str, Any] = {"method": a.method}
    files: list[Path] = []
    failed: list[str] = []
    try:
        if a.method == "sigma_simple":
            delta = a.delta if a.delta is not None else check_uniform(phi, a.epsilon, delta_min)
            if delta is None:
                raise LocalizationError(f"{phi.kind} is not uniformly {a.epsilon:g}-localized")
            f = sigma_simple_approx(phi, delta, a.epsilon, delta_min)
        elif a.method == "nonuniform":
            f = nonuniform_approx(phi, a.epsilon, delta_min)
            delta = 3.0 * min(cell.radius for cell in f.cells)
        else:
            f = recover_zero_localized(phi, delta_min)
            delta = None
    except LocalizationError as e:
        return AnalysisOutcome(
            kind="approx",
            label=label,
            counterexample=True,
            message=str(e),
            summary={**summary, "points": e.points[:20]},
        )

    files.append(f.to_csv(opts.out / f"{label}_map.csv"))
    summary["cells"] = len(f.cells)
    summary["defined_points"] = len(f.defined_on)

    if a.beta is not None and delta is not None:
        g = mollify(f, delta, a.beta)
        files.append(g.to_csv(opts.out / f"{label}_mollified.csv"))
        mollified = check_mollified(phi, f, g, a.epsilon, a.beta, delta_min)
        files.append(write_json(mollified, opts.out, f"{label}_mollifier"))
        summary["mollifier_passed"] = mollified.passed
        if not mollified.passed:
            failed.append("mollifier checks")

    if a.method == "recover" and a.verify:
        pushforward = verify_pushforward_equal(phi, f, opts.trials, opts.seed)
        continuity = check_abs_continuity(phi, f, Measure.uniform(phi.domain))
        files.append(
            write_json(
                {"pushforward": pushforward.model_dump(mode="json"), "abs_continuity": continuity.model_dump(mode="json")},
                opts.out,
                f"{label}_verification",
            )
        )
        summary["pushforward_equal"] = pushforward.passed
        if not pushforward.passed:
            failed.append("pushforward comparison")

    return AnalysisOutcome(
        kind="approx",
        label=label,
        files=[str(p) for p in files],
        counterexample=bool(failed),
        message=f"failed: {', '.join(failed)}" if failed else f"{a.method} approximant built",
        summary=summary,
    )


def _graphs(ctx: ScenarioContext, a: GraphsAnalysis, label: str, opts: RunOptions) -> AnalysisOutcome:
    graph = ctx.graph(a.graph)
    report = carries(graph, ctx.transfunction(a.transfunction))
    files = [graph.to_csv(opts.out / f"{label}_graph.csv"), write_json(report, opts.out, f"{label}_carrier")]
    return AnalysisOutcome(
        kind="graphs",
        label=label,
        files=[str(p) for p in files],
        counterexample=report.passed != a.expect,
        message=f"carrier check {'passed' if report.passed else 'failed'} over {report.rectangles_checked} rectangles",
        summary={"passed": report.passed, "expected": a.expect, "violations": report.violations},
    )


def _markov(ctx: ScenarioContext, a: MarkovAnalysis, label: str, opts: RunOptions) -> AnalysisOutcome:
    t = ctx.markov_matrix(a.markov)
    report = markov_suite(t, opts.trials, opts.seed)
    files = [t.to_csv(opts.out / f"{label}_markov.csv")]
    summary: dict[str, Any] = {"valid": report.valid, "passed": report.passed}
    if report.valid:
        plan = plan_from_markov(t)
        files.append(plan.to_csv(opts.out / f"{label}_plan.csv"))
        if a.cost is not None:
            domain, codomain = t.mu.space, t.nu.space
            cost = metric_cost(domain, codomain) if a.cost == "metric" else read_cost_csv(a.cost, domain, codomain)
            summary["mk_cost"] = mk_cost(plan, cost)
    files.append(write_json(report, opts.out, f"{label}_markov"))
    return AnalysisOutcome(
        kind="markov",
        label=label,
        files=[str(p) for p in files],
        counterexample=not report.passed,
        message="roundtrip checks passed" if report.passed else "; ".join(report.problems) or "roundtrip checks failed",
        summary=summary,
    )


def _popdyn(ctx: ScenarioContext, a: PopdynAnalysis, label: str, opts: RunOptions) -> AnalysisOutcome:
    spec = ctx.scenario.popdyn
    trajectory = simulate(ctx.population, ctx.measure(spec.initial), spec.steps)
    files = trajectory.to_csv(opts.out / label)
    masses = trajectory.masses
    return AnalysisOutcome(
        kind="popdyn",
        label=label,
        files=[str(p) for p in files],
        message=f"simulated {spec.steps} steps",
        summary={"steps": spec.steps, "initial_mass": masses[0], "final_mass": masses[-1]},
    )


def _verify(ctx: ScenarioContext, a: VerifyAnalysis, label: str, opts: RunOptions) -> AnalysisOutcome:
    report = run_suite(ctx, a, seed=opts.seed, trials=opts.trials, delta_min=opts.delta_min)
    path = write_json(report, opts.out, f"{label}_verify")
    return AnalysisOutcome(
        kind="verify",
        label=label,
        files=[str(path)],
        counterexample=not report.passed,
        message=f"{len(report.checks) - report.failures}/{len(report.checks)} checks passed",
        summary={"failures": [f"{c.name}:{c.subject}: {c.detail}" for c in report.checks if not c.passed]},
    )


RUNNERS = {
    "localize": _localize,
    "approx": _approx,
    "graphs": _graphs,
    "markov": _markov,
    "popdyn": _popdyn,
    "verify": _verify,
}


def run_scenario(ctx: ScenarioContext, kinds: Sequence[str] | None, opts: RunOptions) -> list[AnalysisOutcome]:
    """Run the scenario's analyses, optionally restricted to some kinds.

    A verify request on a scenario without verify analyses runs the suite
    over every object with default settings.

    Raises:
        ScenarioError: The scenario has no analysis of a requested kind
    """
    selected = [
        (i, a) for i, a in enumerate(ctx.scenario.analyses) if kinds is None or a.kind in kinds
    ]
    if not selected:
        if kinds is not None and "verify" in kinds:
            selected = [(len(ctx.scenario.analyses), VerifyAnalysis(kind="verify"))]
        else:
            raise ScenarioError(f"scenario has no {'/'.join(kinds or [])} analyses")

    outcomes = []
    for i, analysis in selected:
        label = f"{ctx.scenario.name}_{i}_{analysis.kind}"
        logger.info("running %s", label)
        outcomes.append(RUNNERS[analysis.kind](ctx, analysis, label, opts))
    return outcomes

