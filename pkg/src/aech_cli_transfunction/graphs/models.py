"""Pydantic models for graph-carrier reports."""

from pydantic import BaseModel, Field


class Rectangle(BaseModel):
    """A rectangle A x B, described by its member ids and, for base balls, center and radius."""

    a_members: list[int] = Field(description="Domain ids in A")
    b_members: list[int] = Field(description="Codomain ids in B")
    a_ball: tuple[int, float] | None = Field(default=None, description="(center, radius) when A is a base ball")
    b_ball: tuple[int, float] | None = Field(default=None, description="(center, radius) when B is a base ball")


class CarrierReport(BaseModel):
    """Result of checking that a relation carries a transfunction."""

    transfunction: str
    passed: bool
    rectangles_checked: int = Field(ge=0)
    rectangles_missing_graph: int = Field(ge=0, description="Rectangles with empty intersection with the graph")
    violations: int = Field(default=0, ge=0)
    violation: Rectangle | None = Field(default=None, description="First violating rectangle")
