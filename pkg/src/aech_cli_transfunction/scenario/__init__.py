"""Scenario files: schema, loading and reference resolution."""

from .loader import ScenarioContext, build_context, build_kernel, build_map, line_of, load_context, load_scenario
from .models import ANALYSIS_KINDS, Analysis, Scenario

__all__ = [
    "ANALYSIS_KINDS",
    "Analysis",
    "Scenario",
    "ScenarioContext",
    "build_context",
    "build_kernel",
    "build_map",
    "line_of",
    "load_context",
    "load_scenario",
]
