"""Transfunction constructors: pushforward, projection, convolution, density
scaling, graph-induced, rank-one, linear-matrix and composition."""

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Callable, Literal, Sequence

import numpy as np

from ..errors import SpaceMismatchError, TransfunctionError
from ..geometry import MetricSpace, PointSet
from ..measures import Measure
from .base import Transfunction

if TYPE_CHECKING:
    from ..graphs import GraphCarrier

BoundaryPolicy = Literal["clamp", "truncate"]


class Pushforward(Transfunction):
    """f_#: mu |-> mu(f^{-1}(.)) for a grid map f given as an id array."""

    kind = "pushforward"

    def __init__(self, domain: MetricSpace, codomain: MetricSpace, mapping: np.ndarray | Sequence[int]):
        super().__init__(domain, codomain)
        m = np.asarray(mapping, dtype=int)
        if m.shape != (domain.size,):
            raise TransfunctionError(
                f"pushforward map must assign every one of the {domain.size} domain points"
            )
        if m.size and (m.min() < 0 or m.max() >= codomain.size):
            raise TransfunctionError("pushforward map points outside the codomain")
        m.setflags(write=False)
        self.mapping = m

    @classmethod
    def identity(cls, space: MetricSpace) -> "Pushforward":
        return cls(space, space, space.ids)

    @classmethod
    def from_function(
        cls,
        domain: MetricSpace,
        codomain: MetricSpace,
        fn: Callable[[np.ndarray], np.ndarray],
    ) -> "Pushforward":
        """Evaluate fn on domain coordinates and snap to the nearest codomain point."""
        values = np.asarray(fn(domain.coords), dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        return cls(domain, codomain, codomain.nearest(values))

    @property
    def norm_preserving(self) -> bool | None:
        return True

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        return np.bincount(self.mapping, weights=weights, minlength=self.codomain.size)

    @cached_property
    def impulse_matrix(self) -> np.ndarray:
        rows = np.zeros((self.domain.size, self.codomain.size))
        rows[self.domain.ids, self.mapping] = 1.0
        rows.setflags(write=False)
        return rows

    def preimage(self, points: PointSet) -> PointSet:
        """f^{-1}(B)."""
        if points.space is not self.codomain:
            raise SpaceMismatchError("preimage needs a set on the codomain")
        return PointSet.from_mask(self.domain, points.mask[self.mapping])


class Projection(Transfunction):
    """pi_A as a transfunction on X."""

    kind = "projection"

    def __init__(self, points: PointSet):
        super().__init__(points.space, points.space)
        self.points = points

    @property
    def norm_preserving(self) -> bool | None:
        return len(self.points) == self.domain.size

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        return np.where(self.points.mask, weights, 0.0)


@dataclass(frozen=True)
class Kernel:
    """A displacement measure on a centered sub-grid with the grid's steps.

    ``offsets`` holds the displacements in grid-index units; ``weights`` is
    the measure on the displacement space.
    """

    displacements: MetricSpace
    weights: Measure
    offsets: np.ndarray

    @classmethod
    def from_displacements(
        cls,
        grid: MetricSpace,
        displacements: np.ndarray | Sequence,
        weights: Sequence[float],
    ) -> "Kernel":
        """Build a kernel from displacement coordinates lying on the grid lattice."""
        if grid.grid is None:
            raise TransfunctionError("kernels need a grid space with translation structure")
        disp = np.asarray(displacements, dtype=float)
        if disp.ndim == 1:
            disp = disp[:, None]
        steps = np.asarray(grid.grid.steps)
        offsets = np.rint(disp / steps).astype(int)
        if not np.allclose(offsets * steps, disp, atol=1e-9 * steps.min()):
            raise TransfunctionError("kernel displacements must be multiples of the grid step")
        if len({tuple(o) for o in offsets}) != len(offsets):
            raise TransfunctionError("kernel displacements must be distinct")
        space = MetricSpace(offsets * steps, space_id=f"{grid.space_id}-kernel")
        return cls(space, Measure(space, np.asarray(weights, dtype=float)), offsets)

    @staticmethod
    def lattice_offsets(grid: MetricSpace, radius: float) -> np.ndarray:
        """All lattice displacements u with |u| < radius."""
        if grid.grid is None:
            raise TransfunctionError("kernels need a grid space with translation structure")
        steps = np.asarray(grid.grid.steps)
        reach = [int(np.floor(radius / s)) for s in steps]
        axes = [np.arange(-r, r + 1) for r in reach]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(steps))
        norms = np.sqrt(np.sum((mesh * steps) ** 2, axis=1))
        return mesh[norms < radius - 1e-9 * steps.min()]

    @classmethod
    def uniform(cls, grid: MetricSpace, radius: float, mass: float = 1.0) -> "Kernel":
        """Equal weights on the lattice points of the open ball B(0; radius)."""
        offsets = cls.lattice_offsets(grid, radius)
        if len(offsets) == 0:
            raise TransfunctionError("kernel radius must exceed zero")
        steps = np.asarray(grid.grid.steps)
        return cls.from_displacements(grid, offsets * steps, np.full(len(offsets), mass / len(offsets)))

    @classmethod
    def hat(cls, grid: MetricSpace, radius: float, mass: float = 1.0) -> "Kernel":
        """Radial hat max(0, 1 - |u|/radius), normalized to the given mass."""
        offsets = cls.lattice_offsets(grid, radius)
        if len(offsets) == 0:
            raise TransfunctionError("kernel radius must exceed zero")
        steps = np.asarray(grid.grid.steps)
        disp = offsets * steps
        phi = np.maximum(0.0, 1.0 - np.sqrt(np.sum(disp**2, axis=1)) / radius)
        return cls.from_displacements(grid, disp, mass * phi / phi.sum())

    @classmethod
    def dirac(cls, grid: MetricSpace, mass: float = 1.0) -> "Kernel":
        dim = grid.dimension
        return cls.from_displacements(grid, np.zeros((1, dim)), [mass])

    @property
    def mass(self) -> float:
        return self.weights.norm

    @property
    def radius(self) -> float:
        """Largest |u| carrying nonzero weight."""
        supp = list(self.weights.support)
        if not supp:
            return 0.0
        return float(np.sqrt(np.sum(self.displacements.coords[supp] ** 2, axis=1)).max())


class Convolution(Transfunction):
    """mu |-> mu * kappa on a grid; off-grid mass is clamped or truncated."""

    kind = "convolution"

    def __init__(self, space: MetricSpace, kernel: Kernel, boundary: BoundaryPolicy = "clamp"):
        if space.grid is None:
            raise TransfunctionError("convolution needs a grid space with translation structure")
        if kernel.offsets.shape[1] != space.dimension:
            raise TransfunctionError("kernel dimension does not match the grid")
        if boundary not in ("clamp", "truncate"):
            raise TransfunctionError(f"unknown boundary policy: {boundary}")
        super().__init__(space, space)
        self.kernel = kernel
        self.boundary = boundary
        self._multi = space.grid.unravel(space.ids)

    @property
    def norm_preserving(self) -> bool | None:
        if self.boundary == "clamp":
            return abs(self.kernel.mass - 1.0) <= 1e-12
        return None

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        grid = self.domain.grid
        out = np.zeros(self.domain.size)
        for offset, w in zip(self.kernel.offsets, self.kernel.weights.weights):
            if w == 0.0:
                continue
            target = self._multi + offset
            if self.boundary == "clamp":
                np.add.at(out, grid.ravel(target, clamp=True), weights * w)
            else:
                keep = grid.in_bounds(target)
                np.add.at(out, grid.ravel(target[keep], clamp=False), weights[keep] * w)
        return out


class DensityScale(Transfunction):
    """mu |-> g . inner(mu): pointwise growth/death rates after an inner map."""

    kind = "density_scale"

    def __init__(self, inner: Transfunction, density: np.ndarray | Sequence[float]):
        super().__init__(inner.domain, inner.codomain)
        g = np.asarray(density, dtype=float)
        if g.shape != (inner.codomain.size,):
            raise TransfunctionError("density must give one value per codomain point")
        if np.any(g < 0) or not np.all(np.isfinite(g)):
            raise TransfunctionError("density must be finite and nonnegative")
        g.setflags(write=False)
        self.inner = inner
        self.density = g

    @property
    def strongly_additive(self) -> bool | None:
        return self.inner.strongly_additive

    @property
    def weakly_additive(self) -> bool | None:
        return self.inner.weakly_additive

    @property
    def norm_preserving(self) -> bool | None:
        if np.all(self.density == 1.0):
            return self.inner.norm_preserving
        return None

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        return self.density * self.inner._apply(weights)


class GraphInduced(Transfunction):
    """Phi(mu)(B) = (mu x lam)(Gamma cap (X x B))."""

    kind = "graph_induced"

    def __init__(self, graph: "GraphCarrier", lam: Measure):
        if lam.space is not graph.codomain:
            raise SpaceMismatchError("lambda must live on the graph's codomain")
        if lam.signed:
            raise TransfunctionError("lambda must be nonnegative")
        super().__init__(graph.domain, graph.codomain)
        self.graph = graph
        self.lam = lam
        self._matrix = graph.relation.astype(float) * lam.weights[None, :]

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        return weights @ self._matrix


class RankOne(Transfunction):
    """mu |-> ||mu|| nu."""

    kind = "rank_one"

    def __init__(self, domain: MetricSpace, nu: Measure):
        if nu.signed:
            raise TransfunctionError("rank-one target measure must be nonnegative")
        super().__init__(domain, nu.space)
        self.nu = nu

    @property
    def strongly_additive(self) -> bool | None:
        return None

    @property
    def weakly_additive(self) -> bool | None:
        return None

    @property
    def norm_preserving(self) -> bool | None:
        return True if self.nu.norm == 1.0 else None

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        return float(np.abs(weights).sum()) * self.nu.weights


class MatrixTransfunction(Transfunction):
    """A linear transfunction mu |-> mu @ K given by its impulse-response matrix."""

    kind = "matrix"

    def __init__(self, domain: MetricSpace, codomain: MetricSpace, matrix: np.ndarray, label: str = "matrix"):
        super().__init__(domain, codomain)
        k = np.array(matrix, dtype=float)
        if k.shape != (domain.size, codomain.size):
            raise TransfunctionError(
                f"matrix must have shape {(domain.size, codomain.size)}, got {k.shape}"
            )
        if np.any(k < 0):
            raise TransfunctionError("matrix transfunctions must be positive")
        k.setflags(write=False)
        self.matrix = k
        self.label = label

    @property
    def norm_preserving(self) -> bool | None:
        return bool(np.allclose(self.matrix.sum(axis=1), 1.0, rtol=0, atol=1e-12))

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        return weights @ self.matrix

    @cached_property
    def impulse_matrix(self) -> np.ndarray:
        return self.matrix


class Composition(Transfunction):
    """Left-to-right application of a chain of transfunctions."""

    kind = "composition"

    def __init__(self, stages: Sequence[Transfunction]):
        if not stages:
            raise TransfunctionError("a composition needs at least one stage")
        for left, right in zip(stages, stages[1:]):
            if left.codomain is not right.domain:
                raise SpaceMismatchError(
                    f"cannot compose {left.kind} into {right.kind}: "
                    f"{left.codomain.space_id} != {right.domain.space_id}"
                )
        super().__init__(stages[0].domain, stages[-1].codomain)
        self.stages = tuple(stages)

    @staticmethod
    def _all(flags: list[bool | None]) -> bool | None:
        # Stage-wise flags only certify the chain when every stage is certified.
        return True if all(f is True for f in flags) else None

    @property
    def strongly_additive(self) -> bool | None:
        return self._all([s.strongly_additive for s in self.stages])

    @property
    def weakly_additive(self) -> bool | None:
        return self._all([s.weakly_additive for s in self.stages])

    @property
    def norm_preserving(self) -> bool | None:
        return self._all([s.norm_preserving for s in self.stages])

    def _apply(self, weights: np.ndarray) -> np.ndarray:
        for stage in self.stages:
            weights = stage._apply(weights)
        return weights

    def describe(self) -> dict:
        info = super().describe()
        info["stages"] = [s.describe() for s in self.stages]
        return info


def compose(first: Transfunction, second: Transfunction) -> Composition:
    """Phi_2 after Phi_1; nested compositions are flattened."""
    stages: list[Transfunction] = []
    for t in (first, second):
        stages.extend(t.stages if isinstance(t, Composition) else [t])
    return Composition(stages)


def restrict(phi: Transfunction, points: PointSet) -> Composition:
    """The restriction Phi o pi_A."""
    return compose(Projection(points), phi)
