"""Localization analysis: witnesses, the E function and the D_eps function."""

from .analyzer import (
    check_uniform,
    delta_candidates,
    estimate_D_eps,
    estimate_E,
    floor_ball,
    floor_witness,
    is_localized_at,
    is_localized_via,
    probe_ball,
    probe_image,
    resolve_delta_min,
    semicontinuity_violations,
    tightest_witness,
)
from .models import DeltaEstimate, DeltaReport, LocalizationReport, PointEstimate, UniformWitness

__all__ = [
    "DeltaEstimate",
    "DeltaReport",
    "LocalizationReport",
    "PointEstimate",
    "UniformWitness",
    "check_uniform",
    "delta_candidates",
    "estimate_D_eps",
    "estimate_E",
    "floor_ball",
    "floor_witness",
    "is_localized_at",
    "is_localized_via",
    "probe_ball",
    "probe_image",
    "resolve_delta_min",
    "semicontinuity_violations",
    "tightest_witness",
]
