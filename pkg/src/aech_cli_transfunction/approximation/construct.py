"""Cover-based approximants: sigma-simple maps and zero-localized recovery."""

import logging

import numpy as np

from ..errors import LocalizationError
from ..geometry import PointSet, ball, greedy_cover
from ..localization import (
    estimate_D_eps,
    estimate_E,
    is_localized_at,
    probe_image,
    resolve_delta_min,
    tightest_witness,
)
from ..transfunctions import Transfunction
from .models import UNDEFINED, Cell, PiecewiseMap

logger = logging.getLogger(__name__)


def _cells(phi: Transfunction, centers: list[int], radii: list[float], witnesses: list[int]) -> list[Cell]:
    """Residual cells ball(c_n, r_n) minus the earlier cells; the center always joins its own cell."""
    remaining = phi.domain.all_points()
    cells = []
    for c, r, y in zip(centers, radii, witnesses):
        members = ball(phi.domain, c, r).union(PointSet(phi.domain, (c,))).intersection(remaining)
        remaining = remaining.difference(members)
        cells.append(Cell(center=c, radius=r, witness=y, members=members))
    return cells


def _assemble(phi: Transfunction, cells: list[Cell]) -> PiecewiseMap:
    assignment = np.full(phi.domain.size, UNDEFINED)
    for cell in cells:
        assignment[list(cell.members)] = cell.witness
    return PiecewiseMap(phi.domain, phi.codomain, assignment, cells)


def _verify_cells(phi: Transfunction, cells: list[Cell], epsilon: float, floor: float) -> None:
    codomain = phi.codomain
    failing: list[int] = []
    for cell in cells:
        for x in cell.members:
            image = probe_image(phi, x, cell.radius, floor)
            if image.is_empty():
                continue
            if not codomain.distances[cell.witness, list(image.members)].max() < epsilon - codomain.tol:
                failing.append(x)
    if failing:
        raise LocalizationError(
            f"approximant is not localized at {len(failing)} points", sorted(failing)
        )


def sigma_simple_approx(
    phi: Transfunction,
    delta: float,
    epsilon: float,
    delta_min: float | None = None,
) -> PiecewiseMap:
    """Piecewise-constant f with Phi (delta/3, eps)-localized at (x, f(x)) everywhere.

    Args:
        phi: Transfunction uniformly (delta, eps)-localized on X
        delta: Uniform localization radius
        epsilon: Witness radius
        delta_min: Probe floor

    Returns:
        PiecewiseMap constant on the cells of a greedy delta/3 cover

    Raises:
        LocalizationError: No witness at some cover center, naming the center
    """
    floor = resolve_delta_min(phi, delta_min)
    radius = delta / 3.0
    centers = greedy_cover(phi.domain, radius)
    witnesses = []
    for c in centers:
        y = is_localized_at(phi, c, delta, epsilon, floor)
        if y is None:
            raise LocalizationError(f"no ({delta:g}, {epsilon:g}) localization witness at center {c}", [c])
        witnesses.append(y)
    cells = _cells(phi, centers, [radius] * len(centers), witnesses)
    _verify_cells(phi, cells, epsilon, floor)
    logger.debug("sigma-simple approximant: %d cells", len(cells))
    return _assemble(phi, cells)


def nonuniform_approx(phi: Transfunction, epsilon: float, delta_min: float | None = None) -> PiecewiseMap:
    """Same construction with per-center radii D_eps(c)/3.

    Raises:
        LocalizationError: Some points are not eps-localizable, listing them
    """
    floor = resolve_delta_min(phi, delta_min)
    report = estimate_D_eps(phi, epsilon, floor)
    bad = [p.x for p in report.points if not p.localizable]
    if bad:
        raise LocalizationError(f"{len(bad)} points are not {epsilon:g}-localized", bad)
    d_values = np.asarray(report.d_values())

    covered = np.zeros(phi.domain.size, dtype=bool)
    centers, radii, witnesses = [], [], []
    while not covered.all():
        c = int(np.argmin(covered))
        radius = float(d_values[c]) / 3.0
        y = is_localized_at(phi, c, float(d_values[c]), epsilon, floor)
        if y is None:
            raise LocalizationError(f"D_eps witness vanished at center {c}", [c])
        centers.append(c)
        radii.append(radius)
        witnesses.append(y)
        covered |= phi.domain.distances[c] < radius - phi.domain.tol
        covered[c] = True

    cells = _cells(phi, centers, radii, witnesses)
    _verify_cells(phi, cells, epsilon, floor)
    return _assemble(phi, cells)


def recover_zero_localized(phi: Transfunction, delta_min: float | None = None) -> PiecewiseMap:
    """Recover f with Phi 0-localized via f at grid granularity.

    f(x) is the witness for the smallest admissible epsilon over the open
    ball B(x, delta_min), lowest id on ties; points where Phi vanishes on that
    ball are left undefined. Each f(x) must lie within 2 E(x) + h of the
    witness that estimate_E reports.

    Raises:
        LocalizationError: E exceeds the codomain resolution at some points
    """
    floor = resolve_delta_min(phi, delta_min)
    codomain = phi.codomain
    h = codomain.resolution if np.isfinite(codomain.resolution) else 0.0
    report = estimate_E(phi, floor)
    bad = [p.x for p in report.points if p.e_est > h + codomain.tol]
    if bad:
        raise LocalizationError(f"not 0-localized at {len(bad)} points", bad)

    assignment = np.full(phi.domain.size, UNDEFINED)
    for point in report.points:
        image = phi.image_of(ball(phi.domain, point.x, floor))
        if image.is_empty():
            continue
        y, _ = tightest_witness(phi, image)
        if codomain.distances[y, point.witness_y] > 2.0 * point.e_est + h + codomain.tol:
            raise LocalizationError(f"recovered value at {point.x} leaves the uniqueness band", [point.x])
        assignment[point.x] = y
    return PiecewiseMap(phi.domain, codomain, assignment)

