"""Sampling checks for sigma-additivity, norm preservation and monotonicity,
plus the exact null space and spatial support."""

import logging

import numpy as np

from ..errors import TransfunctionError
from ..geometry import MetricSpace, PointSet
from ..measures import Measure, measure_to_record, orthogonal_sum, project
from .base import Transfunction
from .models import Counterexample, SamplingReport

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12


def random_measure(space: MetricSpace, rng: np.random.Generator, max_support: int | None = None) -> Measure:
    """A nonnegative measure with random support and weights in [0.1, 1)."""
    limit = min(space.size, max_support or space.size)
    k = int(rng.integers(1, limit + 1))
    ids = rng.choice(space.size, size=k, replace=False)
    w = np.zeros(space.size)
    w[ids] = rng.uniform(0.1, 1.0, size=k)
    return Measure(space, w)


def random_subset(space: MetricSpace, rng: np.random.Generator) -> PointSet:
    return PointSet.from_mask(space, rng.random(space.size) < 0.5)


def relative_gap(a: Measure, b: Measure) -> float:
    scale = max(a.norm, b.norm)
    if scale == 0.0:
        return 0.0
    return float(np.abs(a.weights - b.weights).sum()) / scale


def _sparse(mu: Measure) -> dict[str, float]:
    return measure_to_record(mu)["weights"]


def _sum(measures: list[Measure], space: MetricSpace) -> Measure:
    return Measure(space, np.sum([m.weights for m in measures], axis=0))


def check_weak_sigma_additive(phi: Transfunction, trials: int = 200, seed: int = 0) -> SamplingReport:
    """Compare Phi(sum of orthogonal parts) with the sum of Phi(part)."""
    if trials < 1:
        raise TransfunctionError("trial count must be at least 1")
    rng = np.random.default_rng(seed)
    failures, first, worst = 0, None, 0.0
    for _ in range(trials):
        mu = random_measure(phi.domain, rng)
        supp = np.asarray(mu.support.members)
        blocks = int(rng.integers(2, 6))
        labels = rng.integers(0, blocks, size=supp.size)
        parts = [
            project(mu, PointSet(phi.domain, tuple(supp[labels == b])))
            for b in range(blocks)
            if np.any(labels == b)
        ]
        lhs = phi.apply(orthogonal_sum(parts))
        rhs = _sum([phi.apply(part) for part in parts], phi.codomain)
        gap = relative_gap(lhs, rhs)
        worst = max(worst, gap)
        if gap > TOLERANCE:
            failures += 1
            if first is None:
                first = Counterexample(
                    measure=_sparse(mu),
                    parts=[_sparse(p) for p in parts],
                    discrepancy=gap,
                    detail=f"Phi(sum) and sum(Phi) differ over {len(parts)} orthogonal blocks",
                )
    logger.debug("weak additivity of %s: %d/%d failures", phi.kind, failures, trials)
    return SamplingReport(
        property="weakly_sigma_additive",
        transfunction=phi.kind,
        passed=failures == 0,
        trials=trials,
        failures=failures,
        tolerance=TOLERANCE,
        counterexample=first,
        stats={"max_gap": worst},
    )


def check_strong_sigma_additive(phi: Transfunction, trials: int = 200, seed: int = 0) -> SamplingReport:
    """Like the weak check, but over arbitrary (overlapping) nonnegative decompositions."""
    if trials < 1:
        raise TransfunctionError("trial count must be at least 1")
    rng = np.random.default_rng(seed)
    failures, first, worst = 0, None, 0.0
    for _ in range(trials):
        mu = random_measure(phi.domain, rng)
        k = int(rng.integers(2, 5))
        shares = rng.uniform(0.0, 1.0, size=(k, phi.domain.size))
        shares /= shares.sum(axis=0, keepdims=True)
        parts = [Measure(phi.domain, mu.weights * s) for s in shares]
        lhs = phi.apply(_sum(parts, phi.domain))
        rhs = _sum([phi.apply(part) for part in parts], phi.codomain)
        gap = relative_gap(lhs, rhs)
        worst = max(worst, gap)
        if gap > TOLERANCE:
            failures += 1
            if first is None:
                first = Counterexample(
                    measure=_sparse(mu),
                    parts=[_sparse(p) for p in parts],
                    discrepancy=gap,
                    detail=f"Phi(sum) and sum(Phi) differ over {k} overlapping parts",
                )
    return SamplingReport(
        property="strongly_sigma_additive",
        transfunction=phi.kind,
        passed=failures == 0,
        trials=trials,
        failures=failures,
        tolerance=TOLERANCE,
        counterexample=first,
        stats={"max_gap": worst},
    )


def check_norm_preserving(phi: Transfunction, trials: int = 200, seed: int = 0) -> SamplingReport:
    """Sample ||Phi mu|| / ||mu||."""
    if trials < 1:
        raise TransfunctionError("trial count must be at least 1")
    rng = np.random.default_rng(seed)
    failures, first = 0, None
    ratios = []
    for _ in range(trials):
        mu = random_measure(phi.domain, rng)
        ratio = phi.apply(mu).norm / mu.norm
        ratios.append(ratio)
        if abs(ratio - 1.0) > TOLERANCE:
            failures += 1
            if first is None:
                first = Counterexample(
                    measure=_sparse(mu),
                    discrepancy=ratio,
                    detail=f"||Phi mu|| / ||mu|| = {ratio:.12g}",
                )
    return SamplingReport(
        property="norm_preserving",
        transfunction=phi.kind,
        passed=failures == 0,
        trials=trials,
        failures=failures,
        tolerance=TOLERANCE,
        counterexample=first,
        stats={"min_ratio": float(min(ratios)), "max_ratio": float(max(ratios))},
    )


def check_monotone(phi: Transfunction, trials: int = 200, seed: int = 0) -> SamplingReport:
    """mu <= mu' pointwise implies Phi mu <= Phi mu' pointwise."""
    if trials < 1:
        raise TransfunctionError("trial count must be at least 1")
    rng = np.random.default_rng(seed)
    failures, first = 0, None
    for _ in range(trials):
        mu = random_measure(phi.domain, rng)
        bigger = mu + random_measure(phi.domain, rng)
        small, large = phi.apply(mu), phi.apply(bigger)
        excess = float(np.max(small.weights - large.weights, initial=0.0))
        if excess > TOLERANCE * max(large.norm, 1.0):
            failures += 1
            if first is None:
                first = Counterexample(
                    measure=_sparse(mu),
                    parts=[_sparse(bigger)],
                    discrepancy=excess,
                    detail="image of the smaller measure exceeds the image of the larger one",
                )
    return SamplingReport(
        property="monotone",
        transfunction=phi.kind,
        passed=failures == 0,
        trials=trials,
        failures=failures,
        tolerance=TOLERANCE,
        counterexample=first,
    )


def support_and_null(phi: Transfunction) -> tuple[PointSet, PointSet]:
    """Spatial support and null space of a weakly sigma-additive transfunction.

    The base open sets are the radius-h balls, which are singletons on a
    finite space, so the null space is the set of points whose unit mass is
    sent to zero.

    Returns:
        Tuple of (support, null)
    """
    vanishing = ~phi.impulse_supports.any(axis=1)
    null = PointSet.from_mask(phi.domain, vanishing)
    probe = project(Measure.uniform(phi.domain), null)
    if not phi.apply(probe).is_zero():
        raise TransfunctionError(f"{phi.kind} does not vanish on its computed null space")
    return null.complement(), null
