"""Discrete-time population dynamics mu -> g . ((f_# mu) * kappa)."""

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd

from ..errors import SpaceMismatchError, TransfunctionError
from ..geometry import MetricSpace
from ..measures import Measure
from ..measures.io import coord_columns
from ..transfunctions import Composition, Convolution, DensityScale, Kernel, Pushforward, Transfunction

logger = logging.getLogger(__name__)

StepOrder = Literal["migrate_first", "disperse_first"]


@dataclass
class PopulationModel:
    """Migration f, dispersal kernel kappa and growth rates g on one grid.

    ``order`` selects migrate-then-disperse (the default) or
    disperse-then-migrate, mu -> f_#(mu * kappa); growth applies last.
    """

    space: MetricSpace
    migration: np.ndarray
    kernel: Kernel
    growth: np.ndarray
    order: StepOrder = "migrate_first"
    boundary: Literal["clamp", "truncate"] = "clamp"

    def __post_init__(self) -> None:
        if self.space.grid is None:
            raise TransfunctionError("population models need a grid space")
        if self.kernel.weights.signed:
            raise TransfunctionError("dispersal kernel must be nonnegative")
        g = np.asarray(self.growth, dtype=float)
        if g.shape == ():
            g = np.full(self.space.size, float(g))
        self.growth = g
        if self.order not in ("migrate_first", "disperse_first"):
            raise TransfunctionError(f"unknown step order: {self.order}")

    @cached_property
    def transfunction(self) -> Transfunction:
        """The one-step map as a composition of transfunction kinds."""
        push = Pushforward(self.space, self.space, self.migration)
        conv = Convolution(self.space, self.kernel, boundary=self.boundary)
        inner = Composition([push, conv] if self.order == "migrate_first" else [conv, push])
        return DensityScale(inner, self.growth)


def step(model: PopulationModel, mu: Measure) -> Measure:
    """One generation: migrate, disperse, then grow or die."""
    if mu.space is not model.space:
        raise SpaceMismatchError("population measure does not live on the model grid")
    return model.transfunction.apply(mu)


@dataclass
class Trajectory:
    """Measures per step, trajectory[0] being the initial population."""

    space: MetricSpace
    measures: list[Measure]

    @property
    def masses(self) -> list[float]:
        return [mu.norm for mu in self.measures]

    def __len__(self) -> int:
        return len(self.measures)

    def __getitem__(self, k: int) -> Measure:
        return self.measures[k]

    def to_frame(self) -> pd.DataFrame:
        """Long format: step, point id, coordinates, weight."""
        cols = coord_columns(self.space)
        frames = []
        for k, mu in enumerate(self.measures):
            frame = pd.DataFrame(self.space.coords, columns=cols)
            frame.insert(0, "id", self.space.ids)
            frame.insert(0, "step", k)
            frame["weight"] = mu.weights
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"step": range(len(self.measures)), "total_mass": self.masses})

    def to_csv(self, directory: str | Path) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        trajectory = directory / "popdyn_trajectory.csv"
        summary = directory / "popdyn_summary.csv"
        self.to_frame().to_csv(trajectory, index=False)
        self.summary_frame().to_csv(summary, index=False)
        return [trajectory, summary]


def simulate(model: PopulationModel, mu0: Measure, steps: int) -> Trajectory:
    """Iterate the model for ``steps`` generations."""
    if steps < 0:
        raise TransfunctionError("number of steps must be nonnegative")
    measures = [mu0]
    for _ in range(steps):
        measures.append(step(model, measures[-1]))
    logger.debug("simulated %d steps, final mass %.6g", steps, measures[-1].norm)
    return Trajectory(model.space, measures)
