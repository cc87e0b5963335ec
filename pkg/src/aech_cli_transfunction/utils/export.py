"""Report writers: JSON via pydantic, CSV via pandas."""

import json
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel


def get_file_info(path: Path) -> dict:
    """Get file info for output."""
    return {
        "path": str(path),
        "format": path.suffix[1:],
        "size_bytes": path.stat().st_size,
    }


def write_json(report: BaseModel | dict[str, Any], output_dir: str | Path, filename: str) -> Path:
    """Write a report as indented JSON.

    Args:
        report: Pydantic model or plain dictionary
        output_dir: Directory to write the file
        filename: Base filename (without extension)

    Returns:
        Path to the written file
    """
    output_path = Path(output_dir)
    output_path.mkdir(parents=True, exist_ok=True)
    file_path = output_path / f"{filename}.json"
    data = report.model_dump(mode="json") if isinstance(report, BaseModel) else report
    with open(file_path, "w") as f:
        json.dump(data, f, indent=2)
    return file_path


def write_csv(frame: pd.DataFrame, output_dir: str | Path, filename: str) -> Path:
    output_path = Path(output_dir)
    output_path.mkdir(parents=True, exist_ok=True)
    file_path = output_path / f"{filename}.csv"
    frame.to_csv(file_path, index=False)
    return file_path
