"""Utility functions for scenario input and report export."""

from .data import read_scenario_text
from .export import get_file_info, write_csv, write_json

__all__ = ["get_file_info", "read_scenario_text", "write_csv", "write_json"]
