"""Registry of named property checks.

Checks receive a subject object and a CheckOptions and return
(observed, detail, analytic expectation or None).
"""

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from ..errors import TransfunctionError
from ..graphs import GraphCarrier, carries
from ..localization import estimate_D_eps, estimate_E, semicontinuity_violations
from ..markov import MarkovMatrix, markov_suite
from ..measures import Measure
from ..popdyn import PopulationModel, simulate
from ..transfunctions import (
    Transfunction,
    check_monotone,
    check_norm_preserving,
    check_strong_sigma_additive,
    check_weak_sigma_additive,
    support_and_null,
)

Target = Literal["transfunction", "markov", "popdyn", "graph"]
Outcome = tuple[bool, str, bool | None]


@dataclass(frozen=True)
class CheckOptions:
    seed: int = 0
    trials: int = 200
    delta_min: float | None = None
    epsilon: float | None = None
    steps: int = 10
    initial: Measure | None = None
    transfunction: Transfunction | None = None


@dataclass(frozen=True)
class Check:
    name: str
    target: Target
    run: Callable[..., Outcome]
    required: bool = True


CHECKS: dict[str, Check] = {}


def register(name: str, target: Target, required: bool = True) -> Callable:
    """Register a check; a non-required check only fails against an explicit expectation."""

    def decorator(fn: Callable[..., Outcome]) -> Callable[..., Outcome]:
        CHECKS[name] = Check(name, target, fn, required)
        return fn

    return decorator


def checks_for(target: Target) -> list[Check]:
    return [c for c in CHECKS.values() if c.target == target]


def _sampling(report, flag: bool | None) -> Outcome:
    detail = report.counterexample.detail if report.counterexample else f"{report.trials} trials"
    return report.passed, detail, flag


@register("weakly_sigma_additive", "transfunction", required=False)
def _weak(phi: Transfunction, opts: CheckOptions) -> Outcome:
    return _sampling(check_weak_sigma_additive(phi, opts.trials, opts.seed), phi.weakly_additive)


@register("strongly_sigma_additive", "transfunction", required=False)
def _strong(phi: Transfunction, opts: CheckOptions) -> Outcome:
    return _sampling(check_strong_sigma_additive(phi, opts.trials, opts.seed), phi.strongly_additive)


@register("norm_preserving", "transfunction", required=False)
def _norm(phi: Transfunction, opts: CheckOptions) -> Outcome:
    return _sampling(check_norm_preserving(phi, opts.trials, opts.seed), phi.norm_preserving)


@register("monotone", "transfunction", required=False)
def _monotone(phi: Transfunction, opts: CheckOptions) -> Outcome:
    flag = True if phi.strongly_additive is True else None
    return _sampling(check_monotone(phi, opts.trials, opts.seed), flag)


@register("null_space", "transfunction")
def _null(phi: Transfunction, opts: CheckOptions) -> Outcome:
    try:
        support, null = support_and_null(phi)
    except TransfunctionError as e:
        return False, str(e), None
    return True, f"support {len(support)} points, null {len(null)} points", None


@register("localized", "transfunction", required=False)
def _localized(phi: Transfunction, opts: CheckOptions) -> Outcome:
    """Every E estimate below the budget and no point flagged non-local."""
    report = estimate_E(phi, opts.delta_min)
    non_local = [p.x for p in report.points if p.non_local]
    budget = opts.epsilon if opts.epsilon is not None else float("inf")
    over = [p.x for p in report.points if not p.e_est < budget - phi.codomain.tol]
    detail = f"max E {report.max_e:.6g}"
    if non_local:
        detail += f"; non-local at {len(non_local)} points (first {non_local[0]})"
    if over:
        detail += f"; E not below budget {budget:g} at {len(over)} points"
    return not (non_local or over), detail, None


@register("e_upper_semicontinuous", "transfunction")
def _usc(phi: Transfunction, opts: CheckOptions) -> Outcome:
    """No E value above the localization radius of a probe around a neighbor."""
    report = estimate_E(phi, opts.delta_min)
    e = np.asarray(report.e_values())
    bad = semicontinuity_violations(phi, e, report.delta_min)
    if bad:
        x, q = bad[0]
        return False, f"E({q}) = {e[q]:.6g} exceeds the probe radius around its neighbor {x}", None
    return True, f"{len(e)} points, max E {report.max_e:.6g}", None


@register("d_eps_lipschitz", "transfunction")
def _d_lipschitz(phi: Transfunction, opts: CheckOptions) -> Outcome:
    """|D(x) - D(x')| <= d(x, x') + h over all localizable pairs."""
    if opts.epsilon is None:
        return True, "skipped: no epsilon budget", None
    report = estimate_D_eps(phi, opts.epsilon, opts.delta_min)
    ok = np.array([p.localizable for p in report.points])
    dv = np.asarray(report.d_values())
    h = phi.domain.resolution if np.isfinite(phi.domain.resolution) else 0.0
    gap = np.abs(dv[:, None] - dv[None, :]) - phi.domain.distances - h
    gap[~ok, :] = -np.inf
    gap[:, ~ok] = -np.inf
    if np.any(gap > phi.domain.tol):
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        return False, f"D({i}) = {dv[i]:.6g} and D({j}) = {dv[j]:.6g} differ by more than d + h", None
    return True, f"{int(ok.sum())} localizable points", None


@register("markov_roundtrip", "markov")
def _markov(t: MarkovMatrix, opts: CheckOptions) -> Outcome:
    report = markov_suite(t, opts.trials, opts.seed)
    if not report.valid:
        return False, "; ".join(report.problems), None
    return report.passed, f"roundtrip error {report.roundtrip_error:.3g}, relation error {report.relation.max_error:.3g}", None


@register("popdyn_mass", "popdyn")
def _popdyn(model: PopulationModel, opts: CheckOptions) -> Outcome:
    """Constant growth r with a unit clamped kernel gives mass r^k ||mu0||."""
    if opts.initial is None:
        return True, "skipped: no initial population", None
    rates = np.unique(model.growth)
    if rates.size != 1 or model.boundary != "clamp" or abs(model.kernel.mass - 1.0) > 1e-12:
        return True, "skipped: growth not constant or kernel not mass-preserving", None
    trajectory = simulate(model, opts.initial, opts.steps)
    r, m0 = float(rates[0]), opts.initial.norm
    for k, mass in enumerate(trajectory.masses):
        expected = r**k * m0
        if abs(mass - expected) > 1e-9 * max(expected, 1e-300):
            return False, f"step {k}: mass {mass:.12g}, expected {expected:.12g}", None
    return True, f"{opts.steps} steps at rate {r:g}", None


@register("graph_carries", "graph")
def _graph(graph: GraphCarrier, opts: CheckOptions) -> Outcome:
    if opts.transfunction is None:
        return True, "skipped: no transfunction paired with the graph", None
    report = carries(graph, opts.transfunction)
    detail = f"{report.rectangles_checked} rectangles, {report.violations} violations"
    return report.passed, detail, None
