"""Finite measures on a MetricSpace and the carrier/projection calculus."""

from typing import Mapping, Sequence

import numpy as np

from ..errors import NotOrthogonalError, SignedMeasureError, SpaceMismatchError, TransfunctionError
from ..geometry import MetricSpace, PointSet


class Measure:
    """A weight per point of a finite space.

    Measures are immutable. Unless ``signed`` is set every weight is
    nonnegative; every discrete measure is purely atomic.
    """

    __hash__ = None  # type: ignore[assignment]

    def __init__(self, space: MetricSpace, weights: np.ndarray | Sequence[float], signed: bool = False):
        w = np.array(weights, dtype=float)
        if w.shape != (space.size,):
            raise TransfunctionError(
                f"measure on {space.space_id} needs {space.size} weights, got shape {w.shape}"
            )
        if not np.all(np.isfinite(w)):
            raise TransfunctionError("measure weights must be finite")
        if not signed and np.any(w < 0):
            raise SignedMeasureError("negative weight in a measure not flagged as signed")
        w.setflags(write=False)
        self.space = space
        self._weights = w
        self.signed = signed

    @classmethod
    def zero(cls, space: MetricSpace) -> "Measure":
        return cls(space, np.zeros(space.size))

    @classmethod
    def dirac(cls, space: MetricSpace, p: int, mass: float = 1.0) -> "Measure":
        space.check_point(p)
        w = np.zeros(space.size)
        w[p] = mass
        return cls(space, w)

    @classmethod
    def uniform(cls, space: MetricSpace, weight: float = 1.0) -> "Measure":
        return cls(space, np.full(space.size, float(weight)))

    @classmethod
    def indicator(cls, points: PointSet, weight: float = 1.0) -> "Measure":
        return cls(points.space, np.where(points.mask, float(weight), 0.0))

    @classmethod
    def from_sparse(cls, space: MetricSpace, weights: Mapping[int, float], signed: bool = False) -> "Measure":
        w = np.zeros(space.size)
        for p, value in weights.items():
            space.check_point(int(p))
            w[int(p)] = float(value)
        return cls(space, w, signed=signed)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def norm(self) -> float:
        """Total variation ||mu||."""
        return float(np.abs(self._weights).sum())

    @property
    def support(self) -> PointSet:
        """The minimal carrier {p : weight(p) != 0}."""
        return PointSet.from_mask(self.space, self._weights != 0.0)

    def is_zero(self) -> bool:
        return not np.any(self._weights)

    def mass(self, points: PointSet) -> float:
        """mu(B)."""
        _require_same_space(self.space, points.space)
        return float(self._weights[points.mask].sum())

    def scale(self, factor: float) -> "Measure":
        return Measure(self.space, self._weights * factor, signed=self.signed or factor < 0)

    def dominated_by(self, other: "Measure") -> bool:
        """|mu| <= |nu| pointwise."""
        _require_same_space(self.space, other.space)
        return bool(np.all(np.abs(self._weights) <= np.abs(other._weights)))

    def allclose(self, other: "Measure", rtol: float = 1e-12) -> bool:
        """Equality up to rtol relative to the larger norm."""
        _require_same_space(self.space, other.space)
        scale = max(self.norm, other.norm, 1e-300)
        return float(np.abs(self._weights - other._weights).sum()) <= rtol * scale

    def __add__(self, other: "Measure") -> "Measure":
        _require_same_space(self.space, other.space)
        return Measure(self.space, self._weights + other._weights, signed=self.signed or other.signed)

    def __sub__(self, other: "Measure") -> "Measure":
        _require_same_space(self.space, other.space)
        return Measure(self.space, self._weights - other._weights, signed=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        return other.space is self.space and np.array_equal(self._weights, other._weights)

    def __repr__(self) -> str:
        return f"Measure(space={self.space.space_id!r}, norm={self.norm:g}, support={len(self.support)})"


def _require_same_space(a: MetricSpace, b: MetricSpace) -> None:
    if a is not b:
        raise SpaceMismatchError(f"space mismatch: {a.space_id} vs {b.space_id}")


def require_unsigned(mu: Measure) -> None:
    if mu.signed:
        raise SignedMeasureError("operation requires a nonnegative measure")


def is_carried(mu: Measure, points: PointSet) -> bool:
    """mu is carried by A: no mass outside A (exact zero test)."""
    require_unsigned(mu)
    _require_same_space(mu.space, points.space)
    return not np.any(mu.weights[~points.mask])


def project(mu: Measure, points: PointSet) -> Measure:
    """pi_A mu: keep the mass on A, drop the rest."""
    require_unsigned(mu)
    _require_same_space(mu.space, points.space)
    return Measure(mu.space, np.where(points.mask, mu.weights, 0.0))


def orthogonal(mu: Measure, nu: Measure) -> PointSet | None:
    """Witness A with mu carried by A and nu by its complement, or None."""
    require_unsigned(mu)
    require_unsigned(nu)
    _require_same_space(mu.space, nu.space)
    supp = mu.support
    if np.any(supp.mask & nu.support.mask):
        return None
    return supp


def disjoint_carriers(measures: Sequence[Measure]) -> list[PointSet]:
    """Pairwise disjoint carriers S_i of an orthogonal family.

    S_i is the support of the i-th measure; points outside every support go
    to S_0 so the sets partition the space.
    """
    if not measures:
        return []
    space = measures[0].space
    masks = []
    for i, mu in enumerate(measures):
        require_unsigned(mu)
        _require_same_space(space, mu.space)
        masks.append(mu.weights != 0.0)
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if np.any(masks[i] & masks[j]):
                raise NotOrthogonalError(i, j)

    covered = np.logical_or.reduce(masks)
    carriers = [PointSet.from_mask(space, m) for m in masks]
    carriers[0] = PointSet.from_mask(space, masks[0] | ~covered)
    return carriers


def orthogonal_sum(measures: Sequence[Measure], space: MetricSpace | None = None) -> Measure:
    """Bounded orthogonal sum; projections onto the carriers recover the terms."""
    if not measures:
        if space is None:
            raise TransfunctionError("the empty sum needs an explicit space")
        return Measure.zero(space)
    carriers = disjoint_carriers(measures)
    total = Measure(measures[0].space, np.sum([mu.weights for mu in measures], axis=0))
    for i, (mu, s) in enumerate(zip(measures, carriers)):
        if project(total, s) != mu:
            raise TransfunctionError(f"orthogonal sum does not project back onto term {i}")
    return total
