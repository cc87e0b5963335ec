"""(delta, epsilon)-localization, the E function and the D_eps function.

Probe balls are ball(x, delta) joined with the backward floor: the points of
closed_ball(x, delta_min) with id at most x. On a grid the floor stands in
for the continuum fact that every ball contains a neighborhood, and a jump
between adjacent points is charged to the later point, as for a
right-continuous sample. Witness balls are open, so Phi is localized at
epsilon exactly when epsilon exceeds the Chebyshev radius of the probe image,
and E(x) is that radius.
"""

import bisect
import logging

import numpy as np

from ..errors import LocalizationError
from ..geometry import PointSet, ball, chebyshev_radius, closed_ball
from ..transfunctions import Transfunction
from .models import DeltaEstimate, DeltaReport, LocalizationReport, PointEstimate, UniformWitness

logger = logging.getLogger(__name__)


def resolve_delta_min(phi: Transfunction, delta_min: float | None = None) -> float:
    """The probe floor; defaults to the domain resolution h."""
    if delta_min is None:
        h = phi.domain.resolution
        delta_min = h if np.isfinite(h) else 1.0
    if delta_min <= 0:
        raise LocalizationError("delta_min must be positive")
    return float(delta_min)


def floor_ball(phi: Transfunction, x: int, delta_min: float) -> PointSet:
    """x and its lower-id points within delta_min."""
    near = closed_ball(phi.domain, x, delta_min)
    return PointSet(phi.domain, tuple(p for p in near if p <= x))


def probe_ball(phi: Transfunction, x: int, delta: float, delta_min: float) -> PointSet:
    return ball(phi.domain, x, delta).union(floor_ball(phi, x, delta_min))


def probe_image(phi: Transfunction, x: int, delta: float, delta_min: float) -> PointSet:
    """Union of the supports of Phi(delta_p) over the probe ball around x."""
    return phi.image_of(probe_ball(phi, x, delta, delta_min))


def _witness(phi: Transfunction, image: PointSet, epsilon: float) -> int | None:
    if image.is_empty():
        # The zero measure is carried by every ball.
        return 0
    codomain = phi.codomain
    radii = codomain.distances[:, list(image.members)].max(axis=1)
    ok = radii < epsilon - codomain.tol
    return int(np.argmax(ok)) if ok.any() else None


def tightest_witness(phi: Transfunction, image: PointSet) -> tuple[int, float]:
    """Witness for the smallest admissible epsilon around an image.

    Every epsilon above the Chebyshev radius r of the image admits a witness;
    just above r the admissible centers are those at distance at most r from
    the image, and the lowest id wins.

    Returns:
        Tuple of (witness id, r)
    """
    if image.is_empty():
        return 0, 0.0
    radius = chebyshev_radius(phi.codomain, image)
    return _witness(phi, image, radius + 2 * phi.codomain.tol), radius


def floor_witness(phi: Transfunction, x: int, delta_min: float | None = None) -> tuple[int, float]:
    """tightest_witness of the probe image at the floor."""
    floor = resolve_delta_min(phi, delta_min)
    return tightest_witness(phi, probe_image(phi, x, floor, floor))


def is_localized_at(
    phi: Transfunction,
    x: int,
    delta: float,
    epsilon: float,
    delta_min: float | None = None,
) -> int | None:
    """Lowest-id y with Phi(B(x, delta)) carried by the open ball B(y, epsilon).

    Returns:
        The witness id, or None when Phi is not localized at these parameters
    """
    phi.domain.check_point(x)
    if delta <= 0:
        raise LocalizationError("delta must be positive")
    floor = resolve_delta_min(phi, delta_min)
    if delta < floor - phi.domain.tol:
        raise LocalizationError(f"delta {delta} is below the probe floor {floor}")
    return _witness(phi, probe_image(phi, x, delta, floor), epsilon)


def delta_candidates(phi: Transfunction, delta_min: float) -> np.ndarray:
    """delta_min followed by every distinct pairwise distance above it."""
    above = phi.domain.distinct_distances(delta_min)
    above = above[above > delta_min + phi.domain.tol]
    return np.concatenate([[delta_min], above])


def _range_radius(phi: Transfunction) -> float:
    return chebyshev_radius(phi.codomain, phi.image_of(phi.domain.all_points()))


def estimate_E(
    phi: Transfunction,
    delta_min: float | None = None,
    epsilon: float | None = None,
) -> LocalizationReport:
    """Estimate E(x) at every domain point.

    Probe images only grow with delta, so the minimum over the candidate
    radii is attained at the floor.

    Args:
        phi: Transfunction to analyze
        delta_min: Probe floor (defaults to h)
        epsilon: When given, also run the uniformity check at this epsilon

    Returns:
        LocalizationReport with one estimate per point
    """
    floor = resolve_delta_min(phi, delta_min)
    codomain = phi.codomain
    range_radius = _range_radius(phi)

    points: list[PointEstimate] = []
    for x in range(phi.domain.size):
        y, radius = floor_witness(phi, x, floor)
        own = phi.image_of(PointSet(phi.domain, (x,)))
        own_radius = chebyshev_radius(codomain, own)
        points.append(
            PointEstimate(
                x=x,
                coords=phi.domain.coords[x].tolist(),
                e_est=radius,
                witness_y=y,
                witness_coords=codomain.coords[y].tolist(),
                witness_delta=floor,
                non_local=bool(range_radius > codomain.tol and own_radius >= range_radius - codomain.tol),
            )
        )

    uniform = None
    if epsilon is not None:
        delta = check_uniform(phi, epsilon, floor)
        if delta is not None:
            uniform = UniformWitness(delta=delta, epsilon=epsilon)

    report = LocalizationReport(
        transfunction=phi.kind,
        delta_min=floor,
        points=points,
        uniform=uniform,
        probe_based_lower_bound=phi.weakly_additive is not True,
    )
    logger.debug("E estimate for %s: max %.6g", phi.kind, report.max_e)
    return report


def estimate_D_eps(phi: Transfunction, epsilon: float, delta_min: float | None = None) -> DeltaReport:
    """D_eps(x): the largest candidate delta with (delta, eps)-localization at x."""
    floor = resolve_delta_min(phi, delta_min)
    candidates = delta_candidates(phi, floor)
    points: list[DeltaEstimate] = []
    for x in range(phi.domain.size):
        flags = _LocalizedFlags(phi, x, epsilon, floor, candidates)
        # Localization is monotone in delta: find the first failing candidate.
        first_bad = bisect.bisect_left(flags, True)
        localizable = first_bad > 0
        points.append(
            DeltaEstimate(
                x=x,
                coords=phi.domain.coords[x].tolist(),
                d_value=float(candidates[first_bad - 1]) if localizable else 0.0,
                localizable=localizable,
            )
        )
    return DeltaReport(transfunction=phi.kind, epsilon=epsilon, delta_min=floor, points=points)


class _LocalizedFlags:
    """Lazy sequence: item i is True when Phi is NOT localized at candidates[i]."""

    def __init__(self, phi: Transfunction, x: int, epsilon: float, floor: float, candidates: np.ndarray):
        self.phi, self.x, self.epsilon, self.floor, self.candidates = phi, x, epsilon, floor, candidates

    def __len__(self) -> int:
        return len(self.candidates)

    def __getitem__(self, i: int) -> bool:
        image = probe_image(self.phi, self.x, float(self.candidates[i]), self.floor)
        return _witness(self.phi, image, self.epsilon) is None


def check_uniform(phi: Transfunction, epsilon: float, delta_min: float | None = None) -> float | None:
    """A delta certifying uniform eps-localization on X, or None."""
    report = estimate_D_eps(phi, epsilon, delta_min)
    if not all(p.localizable for p in report.points):
        return None
    return min(report.d_values())


def is_localized_via(
    phi: Transfunction,
    assignment: np.ndarray,
    epsilon: float,
    delta: float | None = None,
    delta_min: float | None = None,
) -> list[int]:
    """Points x where Phi fails to be (delta, eps)-localized at (x, f(x)).

    Args:
        phi: Transfunction
        assignment: Codomain id f(x) per domain point (-1 skips the point)
        epsilon: Witness radius
        delta: Probe radius (defaults to the floor)
        delta_min: Probe floor

    Returns:
        Sorted list of failing domain ids (empty when Phi is localized via f)
    """
    floor = resolve_delta_min(phi, delta_min)
    delta = floor if delta is None else delta
    codomain = phi.codomain
    failing = []
    for x in range(phi.domain.size):
        y = int(assignment[x])
        if y < 0:
            continue
        image = probe_image(phi, x, delta, floor)
        if image.is_empty():
            continue
        if not codomain.distances[y, list(image.members)].max() < epsilon - codomain.tol:
            failing.append(x)
    return failing


def semicontinuity_violations(
    phi: Transfunction,
    e_values: np.ndarray | list[float],
    delta_min: float | None = None,
    reach: float | None = None,
) -> list[tuple[int, int]]:
    """Pairs (x, x') where an E profile fails upper semicontinuity.

    For x' within reach of x the floor probe of x' lies in the probe of x at
    radius reach + delta_min, so whenever that probe is localized at epsilon so
    is x', and E(x') may not exceed the probe's Chebyshev radius.

    Args:
        phi: Transfunction
        e_values: E per domain point, as reported by estimate_E
        delta_min: Probe floor
        reach: Neighborhood radius around each x (defaults to the floor)

    Returns:
        Sorted (x, x') pairs; empty when the profile is consistent
    """
    floor = resolve_delta_min(phi, delta_min)
    reach = floor if reach is None else float(reach)
    space = phi.domain
    e = np.asarray(e_values, dtype=float)
    if e.shape != (space.size,):
        raise LocalizationError(f"expected {space.size} E values, got {e.shape}")
    slack = phi.codomain.tol
    found: list[tuple[int, int]] = []
    for x in range(space.size):
        wide = probe_image(phi, x, reach + floor + 2 * space.tol, floor)
        bound = chebyshev_radius(phi.codomain, wide)
        near = np.asarray(closed_ball(space, x, reach).members)
        found.extend((x, int(q)) for q in near[e[near] > bound + slack])
    return found
