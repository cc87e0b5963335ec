"""Transfunctions: maps between spaces of finite measures."""

from .base import Transfunction
from .kinds import (
    BoundaryPolicy,
    Composition,
    Convolution,
    DensityScale,
    GraphInduced,
    Kernel,
    MatrixTransfunction,
    Projection,
    Pushforward,
    RankOne,
    compose,
    restrict,
)
from .maps import MAP_BUILDERS, build_grid_map
from .models import Counterexample, SamplingReport
from .properties import (
    check_monotone,
    check_norm_preserving,
    check_strong_sigma_additive,
    check_weak_sigma_additive,
    random_measure,
    random_subset,
    relative_gap,
    support_and_null,
)

__all__ = [
    "BoundaryPolicy",
    "Composition",
    "Convolution",
    "Counterexample",
    "DensityScale",
    "GraphInduced",
    "Kernel",
    "MAP_BUILDERS",
    "MatrixTransfunction",
    "Projection",
    "Pushforward",
    "RankOne",
    "SamplingReport",
    "Transfunction",
    "build_grid_map",
    "check_monotone",
    "check_norm_preserving",
    "check_strong_sigma_additive",
    "check_weak_sigma_additive",
    "compose",
    "random_measure",
    "random_subset",
    "relative_gap",
    "restrict",
    "support_and_null",
]
