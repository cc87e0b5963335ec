"""Discretization substrate: finite metric spaces, point sets and balls."""

from .space import (
    GridSpec,
    MetricSpace,
    PointSet,
    ball,
    chebyshev,
    chebyshev_radius,
    closed_ball,
    greedy_cover,
)

__all__ = [
    "GridSpec",
    "MetricSpace",
    "PointSet",
    "ball",
    "chebyshev",
    "chebyshev_radius",
    "closed_ball",
    "greedy_cover",
]
