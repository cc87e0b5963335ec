"""Approximant types: piecewise-constant maps and sampled functions."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..errors import TransfunctionError
from ..geometry import MetricSpace, PointSet
from ..measures.io import coord_columns
from ..transfunctions import Projection, Pushforward, Transfunction, compose

UNDEFINED = -1


@dataclass(frozen=True)
class Cell:
    """One cover cell: the residual part of ball(center, radius) and its witness."""

    center: int
    radius: float
    witness: int
    members: PointSet


@dataclass
class PiecewiseMap:
    """A map f: A -> Y given as an id per domain point (UNDEFINED off A).

    When built from a cover, ``cells`` partition the points where f is
    defined and f is constant on each cell.
    """

    domain: MetricSpace
    codomain: MetricSpace
    assignment: np.ndarray
    cells: list[Cell] = field(default_factory=list)

    def __post_init__(self) -> None:
        a = np.asarray(self.assignment, dtype=int)
        if a.shape != (self.domain.size,):
            raise TransfunctionError("assignment needs one entry per domain point")
        if np.any((a < UNDEFINED) | (a >= self.codomain.size)):
            raise TransfunctionError("assignment points outside the codomain")
        a.setflags(write=False)
        self.assignment = a

    @classmethod
    def from_mapping(cls, domain: MetricSpace, codomain: MetricSpace, mapping: np.ndarray) -> "PiecewiseMap":
        return cls(domain, codomain, np.asarray(mapping, dtype=int))

    @property
    def defined_on(self) -> PointSet:
        return PointSet.from_mask(self.domain, self.assignment != UNDEFINED)

    @property
    def is_total(self) -> bool:
        return bool(np.all(self.assignment != UNDEFINED))

    def __call__(self, x: int) -> int:
        self.domain.check_point(x)
        return int(self.assignment[x])

    def values(self) -> np.ndarray:
        """Codomain coordinates per domain point (NaN where undefined)."""
        out = np.full((self.domain.size, self.codomain.dimension), np.nan)
        ok = self.assignment != UNDEFINED
        out[ok] = self.codomain.coords[self.assignment[ok]]
        return out

    def to_transfunction(self) -> Transfunction:
        """f_#; a partial map first projects onto the set where it is defined."""
        mapping = np.where(self.assignment == UNDEFINED, 0, self.assignment)
        push = Pushforward(self.domain, self.codomain, mapping)
        if self.is_total:
            return push
        return compose(Projection(self.defined_on), push)

    def preimage_mask(self, points: PointSet) -> np.ndarray:
        """Domain mask of f^{-1}(B)."""
        ok = self.assignment != UNDEFINED
        out = np.zeros(self.domain.size, dtype=bool)
        out[ok] = points.mask[self.assignment[ok]]
        return out

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.domain.coords, columns=coord_columns(self.domain, "x"))
        frame.insert(0, "id", self.domain.ids)
        frame["y_id"] = self.assignment
        for col, values in zip(coord_columns(self.codomain, "y"), self.values().T):
            frame[col] = values
        cell_of = np.full(self.domain.size, UNDEFINED)
        for n, cell in enumerate(self.cells):
            cell_of[list(cell.members)] = n
        frame["cell"] = cell_of
        return frame

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


@dataclass
class SampledFunction:
    """Real-valued samples g(x) in the coordinate space of Y.

    ``coefficients[x]`` maps each witness id y_m to its weight c_m in the
    convex combination g(x) = sum c_m y_m.
    """

    domain: MetricSpace
    values: np.ndarray
    coefficients: list[dict[int, float]] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.domain.coords, columns=coord_columns(self.domain, "x"))
        frame.insert(0, "id", self.domain.ids)
        cols = ["g"] if self.values.shape[1] == 1 else [f"g{k}" for k in range(self.values.shape[1])]
        for col, values in zip(cols, self.values.T):
            frame[col] = values
        return frame

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


class MollifierReport(BaseModel):
    """Postcondition checks on a mollified approximant."""

    beta: float = Field(gt=0.0, description="Bump radius")
    convex_failures: list[int] = Field(default_factory=list, description="Points failing convex-hull membership")
    lipschitz_bound: float = Field(description="Largest per-pair Lipschitz bound L used")
    lipschitz_violations: list[tuple[int, int]] = Field(
        default_factory=list, description="Adjacent pairs with |g(x) - g(x')| > L d(x, x')"
    )
    localization_failures: list[int] = Field(
        default_factory=list, description="Points where the snapped localization check fails"
    )

    @property
    def passed(self) -> bool:
        return not (self.convex_failures or self.lipschitz_violations or self.localization_failures)


class AbsContinuityReport(BaseModel):
    """Phi mu << f_# mu on a finite space, with the density when it holds."""

    passed: bool
    witness: int | None = Field(default=None, description="Codomain point charged by Phi mu but not by f_# mu")
    density: dict[str, float] = Field(
        default_factory=dict, description="g_mu on the support of f_# mu, keyed by codomain id"
    )
