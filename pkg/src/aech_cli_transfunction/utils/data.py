"""Scenario input from a file path or stdin."""

import sys
from pathlib import Path

from ..errors import ScenarioError


def read_scenario_text(file_path: str | Path | None = None, stdin: bool = True) -> str:
    """Read scenario JSON text from a file path or stdin.

    Args:
        file_path: Optional path to a scenario file
        stdin: Whether to read from stdin if no file_path

    Returns:
        Raw scenario text
    """
    if file_path:
        path = Path(file_path)
        if not path.exists():
            raise ScenarioError(f"scenario file not found: {file_path}")
        return path.read_text()
    if stdin and not sys.stdin.isatty():
        return sys.stdin.read()
    raise ScenarioError("No scenario provided. Provide a file path or pipe a scenario to stdin.")
