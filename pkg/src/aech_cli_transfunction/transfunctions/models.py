"""Pydantic models for transfunction property reports."""

from pydantic import BaseModel, Field


class Counterexample(BaseModel):
    """A sampled input on which a property failed."""

    measure: dict[str, float] = Field(description="Sparse weights of the sampled measure")
    parts: list[dict[str, float]] = Field(
        default_factory=list, description="Sparse weights of the decomposition, if any"
    )
    discrepancy: float = Field(description="Relative L1 discrepancy or norm ratio")
    detail: str = Field(default="", description="Human-readable description of the failure")


class SamplingReport(BaseModel):
    """Result of a sampling check; certifies counterexamples, never universal truth."""

    property: str = Field(description="Checked property name")
    transfunction: str = Field(description="Constructor kind of the transfunction")
    passed: bool = Field(description="True when no sampled trial failed")
    trials: int = Field(ge=0, description="Number of sampled trials")
    failures: int = Field(default=0, ge=0, description="Number of failing trials")
    tolerance: float = Field(description="Relative tolerance used in comparisons")
    counterexample: Counterexample | None = Field(
        default=None, description="First failing trial"
    )
    stats: dict[str, float] = Field(default_factory=dict, description="Property-specific statistics")
