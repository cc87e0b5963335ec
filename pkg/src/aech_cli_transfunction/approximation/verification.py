"""Sampled comparison of a transfunction with f_# and the absolute-continuity check."""

import numpy as np

from ..errors import SpaceMismatchError, TransfunctionError
from ..measures import Measure
from ..transfunctions import Counterexample, SamplingReport, Transfunction, random_measure, random_subset
from ..transfunctions.properties import TOLERANCE
from .models import AbsContinuityReport, PiecewiseMap


def _same_spaces(phi: Transfunction, f: PiecewiseMap) -> None:
    if f.domain is not phi.domain or f.codomain is not phi.codomain:
        raise SpaceMismatchError("map and transfunction live on different spaces")


def verify_pushforward_equal(
    phi: Transfunction,
    f: PiecewiseMap,
    trials: int = 200,
    seed: int = 0,
) -> SamplingReport:
    """Compare Phi(mu)(B) with mu(f^{-1}(B)) on sampled (mu, B) pairs."""
    _same_spaces(phi, f)
    if trials < 1:
        raise TransfunctionError("trial count must be at least 1")
    rng = np.random.default_rng(seed)
    failures, first, worst = 0, None, 0.0
    for _ in range(trials):
        mu = random_measure(phi.domain, rng)
        target = random_subset(phi.codomain, rng)
        lhs = phi.apply(mu).mass(target)
        rhs = float(mu.weights[f.preimage_mask(target)].sum())
        gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs), mu.norm)
        worst = max(worst, gap)
        if gap > TOLERANCE:
            failures += 1
            if first is None:
                first = Counterexample(
                    measure={str(p): float(mu.weights[p]) for p in mu.support},
                    discrepancy=gap,
                    detail=f"Phi(mu)(B) = {lhs:.12g} but mu(f^-1(B)) = {rhs:.12g} for B = {list(target.members)}",
                )
    return SamplingReport(
        property="pushforward_equal",
        transfunction=phi.kind,
        passed=failures == 0,
        trials=trials,
        failures=failures,
        tolerance=TOLERANCE,
        counterexample=first,
        stats={"max_gap": worst},
    )


def check_abs_continuity(phi: Transfunction, f: PiecewiseMap, mu: Measure) -> AbsContinuityReport:
    """Phi mu << f_# mu, with the density g_mu = d(Phi mu)/d(f_# mu) when it holds."""
    _same_spaces(phi, f)
    image = phi.apply(mu)
    reference = f.to_transfunction().apply(mu)
    outside = image.support.difference(reference.support)
    if not outside.is_empty():
        return AbsContinuityReport(passed=False, witness=outside.members[0])
    density = {
        str(q): float(image.weights[q] / reference.weights[q])
        for q in reference.support
    }
    return AbsContinuityReport(passed=True, density=density)
