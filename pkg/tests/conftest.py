"""Shared fixtures: the [-1, 1] line grid and the standard transfunctions on it."""

from pathlib import Path

import numpy as np
import pytest

from aech_cli_transfunction.geometry import MetricSpace
from aech_cli_transfunction.transfunctions import Convolution, Kernel, Pushforward, build_grid_map

FIXTURES = Path(__file__).parent / "fixtures"

H = 0.1


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def line() -> MetricSpace:
    """{-1.0, -0.9, ..., 1.0}."""
    return MetricSpace.line(-1.0, 1.0, H)


@pytest.fixture
def at():
    """Id of the grid point nearest to a coordinate."""

    def locate(space: MetricSpace, value: float) -> int:
        return int(space.nearest([value])[0])

    return locate


@pytest.fixture
def identity(line) -> Pushforward:
    return Pushforward.identity(line)


@pytest.fixture
def heaviside(line) -> Pushforward:
    return Pushforward(line, line, build_grid_map("heaviside", {}, line, line))


@pytest.fixture
def convolution(line) -> Convolution:
    """Uniform kernel on the open ball of radius 0.3: displacements up to 0.2."""
    return Convolution(line, Kernel.uniform(line, 0.3))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)
