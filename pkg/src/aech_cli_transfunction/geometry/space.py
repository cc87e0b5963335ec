"""Finite metric point clouds, point sets, balls, covers and Chebyshev centers."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Literal

import numpy as np

from ..errors import EmptySupportError, SpaceMismatchError, TransfunctionError, UnknownPointError

logger = logging.getLogger(__name__)

MetricKind = Literal["euclidean", "custom"]

# Grid coordinates are rounded so that 0.0 and friends are exact.
COORD_DECIMALS = 12


@dataclass(frozen=True)
class GridSpec:
    """Translation structure of a regular grid: origin, per-axis step and shape."""

    origin: tuple[float, ...]
    steps: tuple[float, ...]
    shape: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.shape)

    @property
    def cell_volume(self) -> float:
        """h^d for a grid with per-axis steps h."""
        return float(np.prod(self.steps))

    def unravel(self, ids: np.ndarray | int) -> np.ndarray:
        """Multi-indices (k, d) for point ids, C order."""
        return np.stack(np.unravel_index(np.asarray(ids), self.shape), axis=-1)

    def ravel(self, multi: np.ndarray, clamp: bool = True) -> np.ndarray:
        """Point ids for multi-indices; off-grid indices are clamped per axis."""
        multi = np.asarray(multi)
        if clamp:
            multi = np.clip(multi, 0, np.asarray(self.shape) - 1)
        return np.ravel_multi_index(tuple(multi[..., k] for k in range(self.dimension)), self.shape)

    def in_bounds(self, multi: np.ndarray) -> np.ndarray:
        multi = np.asarray(multi)
        return np.all((multi >= 0) & (multi < np.asarray(self.shape)), axis=-1)


class MetricSpace:
    """A finite point cloud with a metric.

    Points are identified by contiguous ids ``0..n-1``. The metric is either
    Euclidean on the coordinates or an explicit distance table.
    """

    def __init__(
        self,
        coords: np.ndarray | list,
        distances: np.ndarray | list | None = None,
        space_id: str = "X",
        grid: GridSpec | None = None,
    ):
        """Initialize the space.

        Args:
            coords: Coordinates, one row per point (shape (n, d))
            distances: Optional custom distance table (shape (n, n))
            space_id: Name used in serialized records
            grid: Translation structure when the points form a regular grid
        """
        points = np.asarray(coords, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[0] == 0:
            raise TransfunctionError("a space needs at least one point with coordinates")

        self.space_id = space_id
        self.grid = grid
        self._coords = points
        self._coords.setflags(write=False)

        if distances is None:
            self.metric: MetricKind = "euclidean"
            diff = points[:, None, :] - points[None, :, :]
            table = np.sqrt(np.sum(diff * diff, axis=-1))
        else:
            self.metric = "custom"
            table = np.asarray(distances, dtype=float)
        self._validate_table(table)
        self._distances = table
        self._distances.setflags(write=False)
        if self.metric == "custom":
            bad = self.triangle_violations(limit=1)
            if bad:
                i, j, k = bad[0]
                raise TransfunctionError(
                    f"distance table violates the triangle inequality: d({i}, {j}) > d({i}, {k}) + d({k}, {j})"
                )

    @staticmethod
    def _validate_table(table: np.ndarray) -> None:
        n = table.shape[0]
        if table.shape != (n, n):
            raise TransfunctionError(f"distance table must be square, got {table.shape}")
        if not np.array_equal(table, table.T):
            raise TransfunctionError("distance table is not symmetric")
        if np.any(np.diag(table) != 0.0):
            raise TransfunctionError("distance table must be zero on the diagonal")
        off = table[~np.eye(n, dtype=bool)]
        if np.any(off <= 0.0):
            raise TransfunctionError("distinct points must have positive distance")

    @classmethod
    def grid_space(
        cls,
        mins: Iterable[float],
        maxs: Iterable[float],
        steps: Iterable[float],
        space_id: str = "X",
    ) -> "MetricSpace":
        """Build a regular grid from per-axis min/max/step.

        Args:
            mins: Lower corner per axis
            maxs: Upper corner per axis (included when it lies on the lattice)
            steps: Grid step per axis

        Returns:
            Euclidean MetricSpace with grid translation structure
        """
        mins, maxs, steps = (tuple(float(v) for v in vals) for vals in (mins, maxs, steps))
        if not (len(mins) == len(maxs) == len(steps)) or not mins:
            raise TransfunctionError("grid min/max/step must have the same nonzero length")
        if any(s <= 0 for s in steps):
            raise TransfunctionError("grid steps must be positive")
        if any(hi < lo for lo, hi in zip(mins, maxs)):
            raise TransfunctionError("grid max must not be below grid min")

        counts = tuple(int(round((hi - lo) / s)) + 1 for lo, hi, s in zip(mins, maxs, steps))
        axes = [
            np.round(lo + s * np.arange(c), COORD_DECIMALS)
            for lo, s, c in zip(mins, steps, counts)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        coords = np.stack(mesh, axis=-1).reshape(-1, len(counts))
        logger.debug("built grid %s with shape %s", space_id, counts)
        return cls(coords, space_id=space_id, grid=GridSpec(mins, steps, counts))

    @classmethod
    def line(cls, lo: float, hi: float, step: float, space_id: str = "X") -> "MetricSpace":
        """One-dimensional grid shortcut."""
        return cls.grid_space([lo], [hi], [step], space_id=space_id)

    @property
    def size(self) -> int:
        return self._coords.shape[0]

    @property
    def dimension(self) -> int:
        return self._coords.shape[1]

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def distances(self) -> np.ndarray:
        return self._distances

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.size)

    @property
    def is_grid(self) -> bool:
        return self.grid is not None

    @cached_property
    def resolution(self) -> float:
        """h: the minimal distance between distinct points (inf for one point)."""
        if self.size == 1:
            return float("inf")
        return float(self._distances[~np.eye(self.size, dtype=bool)].min())

    @cached_property
    def tol(self) -> float:
        """Comparison slack absorbing floating-point noise in distances."""
        h = self.resolution
        return 1e-9 * h if np.isfinite(h) else 1e-12

    @cached_property
    def diameter(self) -> float:
        return float(self._distances.max())

    def distance(self, p: int, q: int) -> float:
        self.check_point(p)
        self.check_point(q)
        return float(self._distances[p, q])

    def check_point(self, p: int) -> None:
        if not 0 <= int(p) < self.size:
            raise UnknownPointError(int(p), self.size)

    def all_points(self) -> "PointSet":
        return PointSet(self, tuple(range(self.size)))

    def empty(self) -> "PointSet":
        return PointSet(self, ())

    def nearest(self, values: np.ndarray | list) -> np.ndarray:
        """Ids of the nearest points to coordinate rows (lowest id on ties)."""
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None] if self.dimension == 1 else values[None, :]
        diff = values[:, None, :] - self._coords[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        best = dist.min(axis=1, keepdims=True)
        return np.argmax(dist <= best + self.tol, axis=1)

    def distinct_distances(self, floor: float = 0.0) -> np.ndarray:
        """Ascending distinct pairwise distances >= floor, merged within tolerance."""
        values = np.unique(self._distances[np.triu_indices(self.size, k=1)])
        values = values[values >= floor - self.tol]
        if values.size == 0:
            return values
        keep = np.concatenate([[True], np.diff(values) > self.tol])
        return values[keep]

    def triangle_violations(self, limit: int = 10) -> list[tuple[int, int, int]]:
        """Triples (i, j, k) with d(i, j) > d(i, k) + d(k, j)."""
        found: list[tuple[int, int, int]] = []
        d = self._distances
        for k in range(self.size):
            bad = d > d[:, k][:, None] + d[k, :][None, :] + self.tol
            for i, j in zip(*np.nonzero(bad)):
                found.append((int(i), int(j), k))
                if len(found) >= limit:
                    return found
        return found

    def __repr__(self) -> str:
        return f"MetricSpace(id={self.space_id!r}, size={self.size}, metric={self.metric})"


@dataclass(frozen=True)
class PointSet:
    """A subset of a MetricSpace, stored as a sorted tuple of ids."""

    space: MetricSpace
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted({int(p) for p in self.members}))
        for p in members:
            self.space.check_point(p)
        object.__setattr__(self, "members", members)

    @classmethod
    def from_mask(cls, space: MetricSpace, mask: np.ndarray) -> "PointSet":
        return cls(space, tuple(int(p) for p in np.flatnonzero(mask)))

    @cached_property
    def mask(self) -> np.ndarray:
        out = np.zeros(self.space.size, dtype=bool)
        out[list(self.members)] = True
        out.setflags(write=False)
        return out

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: object) -> bool:
        return p in self.members

    def _same(self, other: "PointSet") -> None:
        if other.space is not self.space:
            raise SpaceMismatchError(
                f"point sets live on different spaces: {self.space.space_id} vs {other.space.space_id}"
            )

    def union(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet.from_mask(self.space, self.mask | other.mask)

    def intersection(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet.from_mask(self.space, self.mask & other.mask)

    def difference(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet.from_mask(self.space, self.mask & ~other.mask)

    def complement(self) -> "PointSet":
        return PointSet.from_mask(self.space, ~self.mask)

    def issubset(self, other: "PointSet") -> bool:
        self._same(other)
        return not np.any(self.mask & ~other.mask)

    def is_empty(self) -> bool:
        return not self.members

    def coords(self) -> np.ndarray:
        return self.space.coords[list(self.members)]


def ball(space: MetricSpace, x: int, r: float) -> PointSet:
    """Open ball {p : d(x, p) < r}."""
    space.check_point(x)
    return PointSet.from_mask(space, space.distances[x] < r - space.tol)


def closed_ball(space: MetricSpace, x: int, r: float) -> PointSet:
    """Closed ball {p : d(x, p) <= r}."""
    space.check_point(x)
    return PointSet.from_mask(space, space.distances[x] <= r + space.tol)


def greedy_cover(space: MetricSpace, r: float) -> list[int]:
    """Centers of a finite subcover by open balls of radius r.

    The next center is always the lowest-id point not yet covered.
    """
    if r <= 0:
        raise TransfunctionError("cover radius must be positive")
    covered = np.zeros(space.size, dtype=bool)
    centers: list[int] = []
    while not covered.all():
        c = int(np.argmin(covered))
        centers.append(c)
        covered |= space.distances[c] < r - space.tol
        covered[c] = True
    return centers


def chebyshev(space: MetricSpace, s: PointSet, candidate_centers: PointSet) -> tuple[int, float]:
    """Smallest enclosing ball of s with center among the candidates.

    Returns:
        Tuple of (center id, radius); ties go to the lowest id
    """
    if s.is_empty():
        raise EmptySupportError("empty support")
    if candidate_centers.is_empty():
        raise EmptySupportError("no candidate centers")
    if s.space is not space or candidate_centers.space is not space:
        raise SpaceMismatchError("chebyshev arguments must live on the given space")
    cands = np.asarray(candidate_centers.members)
    radii = space.distances[np.ix_(cands, np.asarray(s.members))].max(axis=1)
    i = int(np.argmax(radii <= radii.min() + space.tol))
    return int(cands[i]), float(radii[i])


def chebyshev_radius(space: MetricSpace, s: PointSet) -> float:
    """Chebyshev radius of s over all points of the space (0 for empty s)."""
    if s.is_empty():
        return 0.0
    return chebyshev(space, s, space.all_points())[1]
