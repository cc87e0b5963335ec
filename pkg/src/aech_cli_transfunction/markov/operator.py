"""The Markov-operator / transfunction / transport-plan correspondence."""

import itertools
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import MarkovError, TransfunctionError
from ..geometry import MetricSpace
from ..measures import Measure
from ..transfunctions import MatrixTransfunction, Transfunction, check_strong_sigma_additive
from .models import MARKOV_TOLERANCE, MarkovMatrix, MarkovReport, RelationReport, TransportPlan

logger = logging.getLogger(__name__)

# Spaces up to this size get every subset pair enumerated.
EXHAUSTIVE_LIMIT = 6


def b_mu(fdens: np.ndarray, mu: Measure) -> Measure:
    """The measure with density fdens against mu."""
    f = np.asarray(fdens, dtype=float)
    if f.shape != (mu.space.size,):
        raise TransfunctionError("density needs one value per point")
    return Measure(mu.space, f * mu.weights, signed=bool(np.any(f < 0)))


def b_mu_inv(rho: Measure, mu: Measure) -> np.ndarray:
    """The density of rho against mu."""
    if rho.space is not mu.space:
        raise TransfunctionError("rho and mu live on different spaces")
    zero = np.flatnonzero(mu.weights == 0)
    if zero.size:
        raise MarkovError("density undefined", f"mu vanishes at point {int(zero[0])}")
    return rho.weights / mu.weights


def markov_to_transfunction(t: MarkovMatrix) -> MatrixTransfunction:
    """Phi = b_nu . T . b_mu^{-1}, as the matrix K[x, y] = nu(y) M(y, x) / mu(x)."""
    t.validate()
    k = (t.nu.weights[:, None] * t.matrix / t.mu.weights[None, :]).T
    phi = MatrixTransfunction(t.mu.space, t.nu.space, k, label="markov")
    image_error = float(np.abs(phi.apply(t.mu).weights - t.nu.weights).max())
    if image_error > MARKOV_TOLERANCE:
        raise MarkovError("Phi(mu) differs from nu", f"max deviation {image_error:.3g}")
    return phi


def transfunction_to_markov(
    phi: Transfunction,
    mu: Measure,
    nu: Measure,
    trials: int = 200,
    seed: int = 0,
) -> MarkovMatrix:
    """T = b_nu^{-1} . Phi . b_mu^{-1}; column x is the density of Phi(mu(x) delta_x) against nu.

    Raises:
        MarkovError: A precondition fails, with a witness
    """
    if mu.space is not phi.domain or nu.space is not phi.codomain:
        raise MarkovError("base measures must live on the domain and codomain")
    if phi.strongly_additive is not True:
        report = check_strong_sigma_additive(phi, trials=trials, seed=seed)
        if not report.passed:
            raise MarkovError("transfunction is not strongly sigma-additive", report.counterexample.detail)
    rows = phi.impulse_matrix.sum(axis=1)
    off = np.flatnonzero(np.abs(rows - 1.0) > MARKOV_TOLERANCE)
    if off.size:
        x = int(off[0])
        raise MarkovError("transfunction is not total-measure-preserving", f"||Phi(delta_{x})|| = {rows[x]:.15g}")
    image = phi.apply(mu)
    gap = np.abs(image.weights - nu.weights)
    if gap.max() > MARKOV_TOLERANCE:
        y = int(np.argmax(gap))
        raise MarkovError("Phi(mu) differs from nu", f"at y={y}: {image.weights[y]:.15g} vs {nu.weights[y]:.15g}")
    zero = np.flatnonzero(nu.weights <= 0)
    if zero.size:
        raise MarkovError("nu must be strictly positive", f"nu vanishes at point {int(zero[0])}")

    m = (mu.weights[:, None] * phi.impulse_matrix / nu.weights[None, :]).T
    t = MarkovMatrix(mu, nu, m)
    t.validate()
    return t


def plan_from_markov(t: MarkovMatrix) -> TransportPlan:
    """kappa(x, y) = nu(y) M(y, x)."""
    plan = TransportPlan((t.nu.weights[:, None] * t.matrix).T, t.mu, t.nu)
    plan.validate()
    return plan


def markov_from_plan(plan: TransportPlan) -> MarkovMatrix:
    """M(y, x) = kappa(x, y) / nu(y)."""
    plan.validate()
    zero = np.flatnonzero(plan.nu.weights <= 0)
    if zero.size:
        raise MarkovError("nu must be strictly positive", f"nu vanishes at point {int(zero[0])}")
    t = MarkovMatrix(plan.mu, plan.nu, (plan.kappa / plan.nu.weights[None, :]).T)
    t.validate()
    return t


def rebase(phi: Transfunction, mu_new: Measure) -> tuple[MarkovMatrix, TransportPlan]:
    """Re-express the same Phi against a new base mu'; the target base becomes Phi(mu')."""
    t = transfunction_to_markov(phi, mu_new, phi.apply(mu_new))
    return t, plan_from_markov(t)


def _subset_matrix(n: int) -> np.ndarray:
    """All 2^n subsets of n points as indicator rows."""
    return np.array(list(itertools.product([0.0, 1.0], repeat=n)))


def plan_relation_report(
    t: MarkovMatrix,
    phi: Transfunction | None = None,
    trials: int = 200,
    seed: int = 0,
) -> RelationReport:
    """Compare Phi(pi_A mu)(B), kappa(A x B) and the integral of T(1_A) over B against nu.

    Every subset pair is enumerated when both spaces have at most
    EXHAUSTIVE_LIMIT points; otherwise ``trials`` random pairs are drawn.
    """
    phi = phi or markov_to_transfunction(t)
    plan = plan_from_markov(t)
    n_x, n_y = t.mu.space.size, t.nu.space.size
    exhaustive = max(n_x, n_y) <= EXHAUSTIVE_LIMIT
    if exhaustive:
        sa, sb = _subset_matrix(n_x), _subset_matrix(n_y)
    else:
        rng = np.random.default_rng(seed)
        sa = (rng.random((trials, n_x)) < 0.5).astype(float)
        sb = (rng.random((trials, n_y)) < 0.5).astype(float)

    images = np.stack([phi.apply(Measure(phi.domain, row * t.mu.weights)).weights for row in sa])
    via_phi = images @ sb.T
    via_plan = sa @ plan.kappa @ sb.T
    via_operator = ((sb * t.nu.weights[None, :]) @ t.matrix @ sa.T).T
    if not exhaustive:
        # Sampled pairs are matched index by index.
        via_phi, via_plan, via_operator = np.diag(via_phi), np.diag(via_plan), np.diag(via_operator)
    error = np.maximum(np.abs(via_phi - via_plan), np.abs(via_plan - via_operator))
    worst = float(error.max())
    witness = None
    if worst > MARKOV_TOLERANCE:
        flat = int(np.argmax(error))
        i, j = np.unravel_index(flat, error.shape) if exhaustive else (flat, flat)
        witness = (np.flatnonzero(sa[i]).tolist(), np.flatnonzero(sb[j]).tolist())
    return RelationReport(
        exhaustive=exhaustive,
        pairs_checked=int(error.size),
        max_error=worst,
        passed=witness is None,
        witness=witness,
    )


def markov_suite(t: MarkovMatrix, trials: int = 200, seed: int = 0) -> MarkovReport:
    """Run the full roundtrip: T -> Phi -> T', T -> kappa -> T'', and the defining relation."""
    problems = t.violations()
    if problems:
        return MarkovReport(valid=False, problems=problems, passed=False)

    phi = markov_to_transfunction(t)
    image_error = float(np.abs(phi.apply(t.mu).weights - t.nu.weights).max())
    norm_error = float(np.abs(phi.impulse_matrix.sum(axis=1) - 1.0).max())
    back = transfunction_to_markov(phi, t.mu, t.nu, trials=trials, seed=seed)
    plan = plan_from_markov(t)
    again = markov_from_plan(plan)
    roundtrip = float(max(np.abs(back.matrix - t.matrix).max(), np.abs(again.matrix - t.matrix).max()))
    relation = plan_relation_report(t, phi, trials=trials, seed=seed)
    passed = relation.passed and max(image_error, norm_error, roundtrip, *plan.marginal_errors()) <= MARKOV_TOLERANCE
    logger.debug("markov suite: roundtrip error %.3g", roundtrip)
    return MarkovReport(
        valid=True,
        image_error=image_error,
        norm_error=norm_error,
        roundtrip_error=roundtrip,
        plan_marginal_error=max(plan.marginal_errors()),
        relation=relation,
        passed=passed,
    )


def mk_cost(plan: TransportPlan, cost: np.ndarray) -> float:
    """Monge-Kantorovich objective: sum of kappa(x, y) c(x, y)."""
    c = np.asarray(cost, dtype=float)
    if c.shape != plan.kappa.shape:
        raise TransfunctionError(f"cost table must have shape {plan.kappa.shape}, got {c.shape}")
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise TransfunctionError("cost must be finite and nonnegative")
    return float(np.sum(plan.kappa * c))


def metric_cost(domain: MetricSpace, codomain: MetricSpace) -> np.ndarray:
    """c(x, y) = d(x, y); Euclidean on coordinates when X and Y are different spaces."""
    if domain is codomain:
        return np.array(domain.distances)
    if domain.dimension != codomain.dimension:
        raise TransfunctionError("metric cost needs spaces of the same dimension")
    diff = domain.coords[:, None, :] - codomain.coords[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def read_cost_csv(path: str | Path, domain: MetricSpace, codomain: MetricSpace) -> np.ndarray:
    """Cost table with a header row (Y) and an index column (X)."""
    frame = pd.read_csv(path, index_col=0)
    if frame.shape != (domain.size, codomain.size):
        raise TransfunctionError(
            f"cost table {path} has shape {frame.shape}, expected {(domain.size, codomain.size)}"
        )
    return frame.to_numpy(dtype=float)
