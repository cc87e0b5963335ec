"""Measure serialization: sparse JSON records and CSV tables."""

from pathlib import Path
from typing import Any

import pandas as pd

from ..errors import SpaceMismatchError
from ..geometry import MetricSpace
from .measure import Measure


def coord_columns(space: MetricSpace, prefix: str = "x") -> list[str]:
    if space.dimension == 1:
        return [prefix]
    return [f"{prefix}{k}" for k in range(space.dimension)]


def measure_to_record(mu: Measure) -> dict[str, Any]:
    """Sparse record {space_id, weights: {id: value}} holding nonzero weights only."""
    return {
        "space_id": mu.space.space_id,
        "weights": {str(int(p)): float(mu.weights[p]) for p in mu.support},
    }


def measure_from_record(record: dict[str, Any], space: MetricSpace) -> Measure:
    space_id = record.get("space_id", space.space_id)
    if space_id != space.space_id:
        raise SpaceMismatchError(f"record belongs to space {space_id}, not {space.space_id}")
    weights = {int(k): float(v) for k, v in record.get("weights", {}).items()}
    return Measure.from_sparse(space, weights, signed=any(v < 0 for v in weights.values()))


def measure_to_frame(mu: Measure) -> pd.DataFrame:
    """One row per point: id, coordinates, weight."""
    frame = pd.DataFrame(mu.space.coords, columns=coord_columns(mu.space))
    frame.insert(0, "id", mu.space.ids)
    frame["weight"] = mu.weights
    return frame


def write_measure_csv(mu: Measure, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    measure_to_frame(mu).to_csv(path, index=False)
    return path


def read_measure_csv(path: str | Path, space: MetricSpace) -> Measure:
    frame = pd.read_csv(path)
    weights = dict(zip(frame["id"].astype(int), frame["weight"].astype(float)))
    return Measure.from_sparse(space, weights, signed=bool((frame["weight"] < 0).any()))
