"""Pydantic models for localization reports."""

import pandas as pd
from pydantic import BaseModel, Field


class PointEstimate(BaseModel):
    """E estimate at one domain point with its witness ball."""

    x: int = Field(description="Domain point id")
    coords: list[float] = Field(description="Domain point coordinates")
    e_est: float = Field(ge=0.0, description="Estimated E(x): Chebyshev radius of the probe image")
    witness_y: int = Field(description="Codomain id of the witness center")
    witness_coords: list[float] = Field(description="Witness center coordinates")
    witness_delta: float = Field(description="Probe radius attaining the estimate")
    non_local: bool = Field(
        default=False,
        description="Point masses at x already spread over the whole range of Phi",
    )


class UniformWitness(BaseModel):
    """A (delta, epsilon) pair certifying uniform localization."""

    delta: float = Field(gt=0.0)
    epsilon: float = Field(ge=0.0)


class LocalizationReport(BaseModel):
    """Per-point E estimates for a transfunction."""

    transfunction: str = Field(description="Constructor kind")
    delta_min: float = Field(gt=0.0, description="Probe floor")
    points: list[PointEstimate] = Field(description="One record per domain point")
    uniform: UniformWitness | None = Field(default=None, description="Uniformity witness, if requested")
    probe_based_lower_bound: bool = Field(
        default=False,
        description="Set when Phi is not known to be weakly sigma-additive",
    )

    @property
    def max_e(self) -> float:
        return max(p.e_est for p in self.points)

    def e_values(self) -> list[float]:
        return [p.e_est for p in self.points]

    def to_frame(self) -> pd.DataFrame:
        """One row per point: coordinates, E estimate and witness."""
        rows = []
        for p in self.points:
            row = {"id": p.x}
            row.update({f"x{k}": v for k, v in enumerate(p.coords)})
            row["e_est"] = p.e_est
            row["witness_y"] = p.witness_y
            row.update({f"y{k}": v for k, v in enumerate(p.witness_coords)})
            row["witness_delta"] = p.witness_delta
            row["non_local"] = p.non_local
            rows.append(row)
        return pd.DataFrame(rows)


class DeltaEstimate(BaseModel):
    """D_eps at one domain point."""

    x: int
    coords: list[float]
    d_value: float = Field(ge=0.0, description="Largest candidate delta with (delta, eps)-localization")
    localizable: bool = Field(description="False when Phi is not eps-localized at x (D recorded as 0)")


class DeltaReport(BaseModel):
    """D_eps values over the domain."""

    transfunction: str
    epsilon: float = Field(ge=0.0)
    delta_min: float = Field(gt=0.0)
    points: list[DeltaEstimate]

    def d_values(self) -> list[float]:
        return [p.d_value for p in self.points]

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"id": p.x, **{f"x{k}": v for k, v in enumerate(p.coords)}, "d_eps": p.d_value, "localizable": p.localizable}
            for p in self.points
        ]
        return pd.DataFrame(rows)
