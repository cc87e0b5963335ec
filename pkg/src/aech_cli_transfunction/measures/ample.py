"""Ample measure families generated by a strictly positive measure."""

from dataclasses import dataclass

import numpy as np

from ..errors import NotOrthogonalError, TransfunctionError
from ..geometry import PointSet
from .measure import Measure, orthogonal_sum, project


@dataclass(frozen=True)
class AmpleFamily:
    """The family {pi_A lam : A subset of X} for a strictly positive lam."""

    base: Measure

    def __post_init__(self) -> None:
        if self.base.signed or np.any(self.base.weights <= 0):
            raise TransfunctionError("an ample family needs a strictly positive base measure")

    def member(self, points: PointSet) -> Measure:
        return project(self.base, points)

    def contains(self, mu: Measure) -> bool:
        if mu.space is not self.base.space or mu.signed:
            return False
        return project(self.base, mu.support) == mu


def check_ample(family: AmpleFamily, subsets: list[PointSet]) -> list[str]:
    """Exercise the ample-space axioms on the given subsets.

    Returns:
        Human-readable descriptions of violated axioms (empty when all hold)
    """
    failures: list[str] = []
    for i, a in enumerate(subsets):
        mu = family.member(a)
        if not a.is_empty() and mu.is_zero():
            failures.append(f"nonempty set {i} carries no nonzero member")
        for j, b in enumerate(subsets):
            if not family.contains(project(mu, b)):
                failures.append(f"projection of member {i} onto set {j} left the family")
            if a.intersection(b).is_empty():
                try:
                    total = orthogonal_sum([mu, family.member(b)])
                except NotOrthogonalError:
                    failures.append(f"members {i} and {j} on disjoint sets are not orthogonal")
                    continue
                if not family.contains(total):
                    failures.append(f"orthogonal sum of members {i} and {j} left the family")
    return failures
