"""Named grid maps used to build pushforwards from scenario files."""

from typing import Any, Callable

import numpy as np

from ..errors import TransfunctionError
from ..geometry import MetricSpace
from .kinds import Pushforward

MapFunction = Callable[[np.ndarray], np.ndarray]


def _identity(params: dict[str, Any]) -> MapFunction:
    return lambda x: x


def _heaviside(params: dict[str, Any]) -> MapFunction:
    threshold = float(params.get("threshold", 0.0))
    low = float(params.get("low", 0.0))
    high = float(params.get("high", 1.0))
    return lambda x: np.where(x[:, :1] >= threshold, high, low)


def _heaviside_sum(params: dict[str, Any]) -> MapFunction:
    """x |-> sum_n w_n H(x - c_n)."""
    centers = [float(c) for c in params["centers"]]
    weights = [float(w) for w in params.get("weights", [2.0**n for n in range(len(centers))])]
    if len(weights) != len(centers):
        raise TransfunctionError("heaviside_sum needs one weight per center")

    def fn(x: np.ndarray) -> np.ndarray:
        total = np.zeros((x.shape[0], 1))
        for c, w in zip(centers, weights):
            total += w * (x[:, :1] >= c)
        return total

    return fn


def _affine(params: dict[str, Any]) -> MapFunction:
    scale = float(params.get("scale", 1.0))
    shift = float(params.get("shift", 0.0))
    return lambda x: scale * x + shift


def _constant(params: dict[str, Any]) -> MapFunction:
    value = np.atleast_1d(np.asarray(params["value"], dtype=float))
    return lambda x: np.tile(value, (x.shape[0], 1))


def _reflect(params: dict[str, Any]) -> MapFunction:
    center = float(params.get("center", 0.0))
    return lambda x: 2.0 * center - x


MAP_BUILDERS: dict[str, Callable[[dict[str, Any]], MapFunction]] = {
    "identity": _identity,
    "heaviside": _heaviside,
    "heaviside_sum": _heaviside_sum,
    "affine": _affine,
    "constant": _constant,
    "reflect": _reflect,
}


def build_grid_map(name: str, params: dict[str, Any], domain: MetricSpace, codomain: MetricSpace) -> np.ndarray:
    """Evaluate a named map on the domain grid and snap the values to the codomain.

    Args:
        name: One of MAP_BUILDERS
        params: Map parameters from the scenario file
        domain: X
        codomain: Y

    Returns:
        Id array assigning a codomain point to every domain point
    """
    builder = MAP_BUILDERS.get(name)
    if builder is None:
        raise TransfunctionError(f"Unknown map: {name}. Valid maps: {', '.join(MAP_BUILDERS)}")
    return Pushforward.from_function(domain, codomain, builder(params)).mapping
