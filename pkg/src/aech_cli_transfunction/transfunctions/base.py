"""Base class for all transfunctions."""

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, ClassVar

import numpy as np

from ..errors import SpaceMismatchError
from ..geometry import MetricSpace, PointSet
from ..measures import Measure, require_unsigned


class Transfunction(ABC):
    """A map from finite measures on X to finite measures on Y.

    Subclasses implement ``_apply`` on weight vectors. Analytic flags record
    what is known from the constructor kind: True/False when known, None when
    only the samplers can tell.
    """

    kind: ClassVar[str]

    def __init__(self, domain: MetricSpace, codomain: MetricSpace):
        """Initialize with the domain X and codomain Y.

        Args:
            domain: Space the input measures live on
            codomain: Space the output measures live on
        """
        self.domain = domain
        self.codomain = codomain

    @abstractmethod
    def _apply(self, weights: np.ndarray) -> np.ndarray:
        """Map a nonnegative weight vector on X to a weight vector on Y."""

    @property
    def strongly_additive(self) -> bool | None:
        return True

    @property
    def weakly_additive(self) -> bool | None:
        strong = self.strongly_additive
        return True if strong else None

    @property
    def norm_preserving(self) -> bool | None:
        return None

    def apply(self, mu: Measure) -> Measure:
        """Evaluate the transfunction on a nonnegative measure on X."""
        if mu.space is not self.domain:
            raise SpaceMismatchError(
                f"{self.kind} expects measures on {self.domain.space_id}, got {mu.space.space_id}"
            )
        require_unsigned(mu)
        return Measure(self.codomain, self._apply(mu.weights))

    def __call__(self, mu: Measure) -> Measure:
        return self.apply(mu)

    @cached_property
    def impulse_matrix(self) -> np.ndarray:
        """Row p holds the weights of the image of the unit point mass at p."""
        rows = np.empty((self.domain.size, self.codomain.size))
        unit = np.zeros(self.domain.size)
        for p in range(self.domain.size):
            unit[p] = 1.0
            rows[p] = self._apply(unit)
            unit[p] = 0.0
        rows.setflags(write=False)
        return rows

    @cached_property
    def impulse_supports(self) -> np.ndarray:
        """Boolean (n_X, n_Y): q lies in the support of the image of delta_p."""
        out = self.impulse_matrix != 0.0
        out.setflags(write=False)
        return out

    def image_of(self, points: PointSet) -> PointSet:
        """Union of the supports of the point-mass images over A.

        For a weakly sigma-additive transfunction this is the smallest set B
        with Phi(A) carried by B.
        """
        if points.space is not self.domain:
            raise SpaceMismatchError("point set does not live on the domain")
        if points.is_empty():
            return self.codomain.empty()
        mask = self.impulse_supports[list(points.members)].any(axis=0)
        return PointSet.from_mask(self.codomain, mask)

    def maps_into(self, points: PointSet, target: PointSet) -> bool:
        """Phi(A) is carried by B, probed with point masses."""
        if target.space is not self.codomain:
            raise SpaceMismatchError("target set does not live on the codomain")
        return self.image_of(points).issubset(target)

    def describe(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "domain": self.domain.space_id,
            "codomain": self.codomain.space_id,
            "strongly_additive": self.strongly_additive,
            "weakly_additive": self.weakly_additive,
            "norm_preserving": self.norm_preserving,
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.domain.space_id} -> {self.codomain.space_id})"
