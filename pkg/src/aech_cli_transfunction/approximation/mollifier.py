"""Mollification of piecewise-constant approximants on grids.

g(x) = sum_u f(x + u) phi(-u) h^d with the radial hat phi(u) = max(0, 1 - |u|/beta)
normalized to unit sum; off-grid x + u is clamped to the grid like the
convolution boundary policy.
"""

import logging
from collections import defaultdict

import numpy as np

from ..errors import MollificationError
from ..geometry import MetricSpace
from ..localization import is_localized_via, resolve_delta_min
from ..transfunctions import Kernel, Transfunction
from .models import MollifierReport, PiecewiseMap, SampledFunction

logger = logging.getLogger(__name__)

CONVEX_TOLERANCE = 1e-9


def _sources(space: MetricSpace, kernel: Kernel) -> np.ndarray:
    """(n, K) ids of the clamped points x + u for every offset u."""
    grid = space.grid
    multi = grid.unravel(space.ids)
    return np.stack([grid.ravel(multi + off, clamp=True) for off in kernel.offsets], axis=1)


def _check_grid(space: MetricSpace) -> None:
    if space.grid is None:
        raise MollificationError("mollification requires translation structure")


def mollify(f: PiecewiseMap, delta: float, beta: float) -> SampledFunction:
    """Smooth f by a hat bump of radius beta <= delta/3.

    Args:
        f: Total piecewise map on a grid
        delta: Localization radius f was built for
        beta: Bump radius

    Returns:
        SampledFunction with the convex-combination coefficients per point
    """
    space = f.domain
    _check_grid(space)
    if not f.is_total:
        raise MollificationError("mollification needs a map defined on the whole grid")
    if beta <= 0 or beta > delta / 3.0 + space.tol:
        raise MollificationError(f"bump radius must lie in (0, delta/3], got {beta:g}")

    kernel = Kernel.hat(space, beta)
    weights = kernel.weights.weights
    src = _sources(space, kernel)
    witness = f.assignment[src]
    values = np.einsum("k,nkd->nd", weights, f.codomain.coords[witness])

    coefficients: list[dict[int, float]] = []
    for row in witness:
        acc: dict[int, float] = defaultdict(float)
        for y, w in zip(row, weights):
            acc[int(y)] += float(w)
        coefficients.append(dict(sorted(acc.items())))
    return SampledFunction(space, values, coefficients)


def lipschitz_bound(local_max: float, kernel: Kernel, beta: float) -> float:
    """L = 2 M N / (beta Z) for the hat bump with N lattice points and mass Z before normalization."""
    disp = kernel.displacements.coords
    raw = np.maximum(0.0, 1.0 - np.sqrt(np.sum(disp**2, axis=1)) / beta)
    return 2.0 * local_max * len(raw) / (beta * raw.sum())


def _adjacent_pairs(space: MetricSpace) -> list[tuple[int, int]]:
    grid = space.grid
    multi = grid.unravel(space.ids)
    pairs = []
    for axis in range(grid.dimension):
        step = np.zeros(grid.dimension, dtype=int)
        step[axis] = 1
        keep = grid.in_bounds(multi + step)
        targets = grid.ravel(multi[keep] + step, clamp=False)
        pairs.extend(zip(space.ids[keep].tolist(), targets.tolist()))
    return pairs


def check_mollified(
    phi: Transfunction,
    f: PiecewiseMap,
    g: SampledFunction,
    epsilon: float,
    beta: float,
    delta_min: float | None = None,
) -> MollifierReport:
    """Check convex-hull membership, the grid Lipschitz bound and snapped localization."""
    space, codomain = f.domain, f.codomain
    _check_grid(space)
    y_coords = codomain.coords
    norms = np.sqrt(np.sum(y_coords**2, axis=1))

    convex_failures = []
    for x, coeffs in enumerate(g.coefficients):
        ids = np.fromiter(coeffs.keys(), dtype=int)
        c = np.fromiter(coeffs.values(), dtype=float)
        combo = c @ y_coords[ids]
        near = space.distances[x] < beta - space.tol
        local = set(f.assignment[near].tolist())
        if (
            np.any(c < 0)
            or abs(c.sum() - 1.0) > CONVEX_TOLERANCE
            or np.abs(combo - g.values[x]).max() > CONVEX_TOLERANCE
            or not set(ids.tolist()) <= local
        ):
            convex_failures.append(x)

    kernel = Kernel.hat(space, beta)
    worst_bound, violations = 0.0, []
    for x, x2 in _adjacent_pairs(space):
        keys = list(g.coefficients[x].keys() | g.coefficients[x2].keys())
        bound = lipschitz_bound(float(norms[keys].max()), kernel, beta)
        worst_bound = max(worst_bound, bound)
        gap = float(np.sqrt(np.sum((g.values[x] - g.values[x2]) ** 2)))
        if gap > bound * space.distances[x, x2] + CONVEX_TOLERANCE:
            violations.append((x, x2))

    floor = resolve_delta_min(phi, delta_min)
    h = codomain.resolution if np.isfinite(codomain.resolution) else 0.0
    snapped = codomain.nearest(g.values)
    localization_failures = is_localized_via(phi, snapped, epsilon + h, delta=beta, delta_min=floor)

    report = MollifierReport(
        beta=beta,
        convex_failures=convex_failures,
        lipschitz_bound=worst_bound,
        lipschitz_violations=violations,
        localization_failures=localization_failures,
    )
    logger.debug("mollifier checks passed=%s", report.passed)
    return report
