"""Pydantic models for property-suite results."""

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """One registered check run against one scenario object."""

    name: str = Field(description="Registered check name")
    subject: str = Field(description="Scenario object the check ran on")
    observed: bool = Field(description="Whether the property held")
    expected_flag: bool | None = Field(default=None, description="Declared or analytic expectation, if any")
    passed: bool = Field(description="Observed outcome matches the expectation (or holds, without one)")
    detail: str = Field(default="", description="Witness or summary")


class SuiteReport(BaseModel):
    """Machine-readable summary of a verify run."""

    scenario: str
    checks: list[CheckResult]
    passed: bool
    failures: int = Field(ge=0)
    seed: int
    trials: int
