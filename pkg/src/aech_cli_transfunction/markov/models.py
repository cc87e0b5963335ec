"""Markov matrices, transport plans and the correspondence reports."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..errors import MarkovError, TransfunctionError
from ..measures import Measure

MARKOV_TOLERANCE = 1e-12


def _strictly_positive_probability(mu: Measure, name: str) -> list[str]:
    problems = []
    if mu.signed or np.any(mu.weights <= 0):
        bad = int(np.flatnonzero(mu.weights <= 0)[0]) if np.any(mu.weights <= 0) else -1
        problems.append(f"{name} must be strictly positive (point {bad})")
    if abs(mu.norm - 1.0) > MARKOV_TOLERANCE:
        problems.append(f"{name} must have norm 1, got {mu.norm:.15g}")
    return problems


@dataclass
class MarkovMatrix:
    """M indexed (Y id, X id), acting on densities over (X, mu) into densities over (Y, nu)."""

    mu: Measure
    nu: Measure
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (self.nu.space.size, self.mu.space.size):
            raise TransfunctionError(
                f"Markov matrix must have shape {(self.nu.space.size, self.mu.space.size)}, got {m.shape}"
            )
        m.setflags(write=False)
        self.matrix = m

    def violations(self) -> list[str]:
        """Every broken axiom, naming the offending row or column."""
        problems = _strictly_positive_probability(self.mu, "mu") + _strictly_positive_probability(self.nu, "nu")
        m = self.matrix
        if np.any(m < 0):
            y, x = np.argwhere(m < 0)[0]
            problems.append(f"negative entry at row y={y}, column x={x}")
        rows = m.sum(axis=1)
        for y in np.flatnonzero(np.abs(rows - 1.0) > MARKOV_TOLERANCE):
            problems.append(f"row y={y} sums to {rows[y]:.15g}, expected 1")
        marginal = self.nu.weights @ m
        for x in np.flatnonzero(np.abs(marginal - self.mu.weights) > MARKOV_TOLERANCE):
            problems.append(
                f"column x={x} integrates to {marginal[x]:.15g} against nu, expected mu(x)={self.mu.weights[x]:.15g}"
            )
        return problems

    def validate(self) -> None:
        problems = self.violations()
        if problems:
            raise MarkovError("invalid Markov matrix", "; ".join(problems))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.matrix, columns=[f"x{x}" for x in range(self.matrix.shape[1])])
        frame.insert(0, "y", np.arange(self.matrix.shape[0]))
        return frame

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


@dataclass
class TransportPlan:
    """kappa indexed (X id, Y id) with marginals mu and nu."""

    kappa: np.ndarray
    mu: Measure
    nu: Measure

    def __post_init__(self) -> None:
        k = np.array(self.kappa, dtype=float)
        if k.shape != (self.mu.space.size, self.nu.space.size):
            raise TransfunctionError(
                f"plan must have shape {(self.mu.space.size, self.nu.space.size)}, got {k.shape}"
            )
        k.setflags(write=False)
        self.kappa = k

    def marginal_errors(self) -> tuple[float, float]:
        """Max deviation of the X and Y marginals from mu and nu."""
        return (
            float(np.abs(self.kappa.sum(axis=1) - self.mu.weights).max()),
            float(np.abs(self.kappa.sum(axis=0) - self.nu.weights).max()),
        )

    def validate(self) -> None:
        if np.any(self.kappa < 0):
            raise MarkovError("transport plan has a negative entry")
        ex, ey = self.marginal_errors()
        if ex > MARKOV_TOLERANCE:
            raise MarkovError("plan X-marginal differs from mu", f"max deviation {ex:.3g}")
        if ey > MARKOV_TOLERANCE:
            raise MarkovError("plan Y-marginal differs from nu", f"max deviation {ey:.3g}")

    def mass(self, a_mask: np.ndarray, b_mask: np.ndarray) -> float:
        """kappa(A x B)."""
        return float(self.kappa[np.ix_(a_mask, b_mask)].sum())

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.kappa, columns=[f"y{y}" for y in range(self.kappa.shape[1])])
        frame.insert(0, "x", np.arange(self.kappa.shape[0]))
        return frame

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path


class RelationReport(BaseModel):
    """Phi(pi_A mu)(B) = kappa(A x B) = integral over B of T(1_A) d nu."""

    exhaustive: bool = Field(description="All subset pairs enumerated (otherwise sampled)")
    pairs_checked: int = Field(ge=0)
    max_error: float = Field(ge=0.0, description="Largest absolute discrepancy among the three forms")
    passed: bool
    witness: tuple[list[int], list[int]] | None = Field(default=None, description="First failing (A, B)")


class MarkovReport(BaseModel):
    """Roundtrip suite over one Markov matrix."""

    valid: bool = Field(description="Markov axioms hold")
    problems: list[str] = Field(default_factory=list, description="Axiom violations, naming rows and columns")
    image_error: float | None = Field(default=None, description="max |Phi(mu) - nu|")
    norm_error: float | None = Field(default=None, description="max |row sum of Phi - 1|")
    roundtrip_error: float | None = Field(default=None, description="max |M - M'| after the roundtrip")
    plan_marginal_error: float | None = None
    relation: RelationReport | None = None
    passed: bool
