"""Load scenario files and resolve them into live objects.

Every input problem surfaces as a ScenarioError anchored to a line of the
source file when one can be found.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from ..errors import ScenarioError, TransfunctionError
from ..geometry import MetricSpace, PointSet
from ..graphs import GraphCarrier, exact_graph, fat_graph
from ..markov import MarkovMatrix, TransportPlan, markov_from_plan, markov_to_transfunction
from ..measures import Measure
from ..popdyn import PopulationModel
from ..transfunctions import (
    Composition,
    Convolution,
    DensityScale,
    GraphInduced,
    Kernel,
    MatrixTransfunction,
    Projection,
    Pushforward,
    RankOne,
    Transfunction,
    build_grid_map,
)
from ..utils import read_scenario_text
from .models import (
    CompositionSpec,
    ConvolutionSpec,
    DensityScaleSpec,
    GraphInducedSpec,
    GridSpaceSpec,
    KernelSpec,
    MapSpec,
    MarkovInducedSpec,
    MatrixSpec,
    ProjectionSpec,
    PushforwardSpec,
    RankOneSpec,
    Scenario,
)

logger = logging.getLogger(__name__)


def line_of(source: str, token: str) -> int | None:
    """1-based line of the first occurrence of the quoted token."""
    needle = f'"{token}"'
    for number, line in enumerate(source.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _validation_message(error: ValidationError, source: str) -> ScenarioError:
    first = error.errors()[0]
    loc = [str(part) for part in first["loc"]]
    keys = [part for part in first["loc"] if isinstance(part, str)]
    line = None
    for key in reversed(keys):
        line = line_of(source, key)
        if line is not None:
            break
    return ScenarioError(f"{'.'.join(loc) or 'scenario'}: {first['msg']}", line)


def load_scenario(path: str | Path | None) -> tuple[Scenario, str]:
    """Read and validate a scenario file (stdin when path is None).

    Returns:
        Tuple of (validated scenario, source text)

    Raises:
        ScenarioError: Missing file, malformed JSON or schema violation
    """
    source = read_scenario_text(path)
    try:
        data = json.loads(source)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"invalid JSON: {e.msg}", e.lineno) from e
    try:
        return Scenario.model_validate(data), source
    except ValidationError as e:
        raise _validation_message(e, source) from e


@dataclass
class ScenarioContext:
    """Resolved scenario objects by name."""

    scenario: Scenario
    source: str
    spaces: dict[str, MetricSpace] = field(default_factory=dict)
    measures: dict[str, Measure] = field(default_factory=dict)
    transfunctions: dict[str, Transfunction] = field(default_factory=dict)
    graphs: dict[str, GraphCarrier] = field(default_factory=dict)
    markov: dict[str, MarkovMatrix] = field(default_factory=dict)
    population: PopulationModel | None = None

    def fail(self, message: str, token: str) -> ScenarioError:
        return ScenarioError(message, line_of(self.source, token))

    def space(self, name: str) -> MetricSpace:
        if name not in self.spaces:
            raise self.fail(f"unknown space: {name}", name)
        return self.spaces[name]

    def measure(self, name: str) -> Measure:
        if name not in self.measures:
            raise self.fail(f"unknown measure: {name}", name)
        return self.measures[name]

    def graph(self, name: str) -> GraphCarrier:
        if name not in self.graphs:
            raise self.fail(f"unknown graph: {name}", name)
        return self.graphs[name]

    def markov_matrix(self, name: str) -> MarkovMatrix:
        if name not in self.markov:
            raise self.fail(f"unknown Markov operator: {name}", name)
        return self.markov[name]

    def transfunction(self, name: str) -> Transfunction:
        if name not in self.transfunctions:
            raise self.fail(f"unknown transfunction: {name}", name)
        return self.transfunctions[name]


def _build_space(name: str, spec) -> MetricSpace:
    if isinstance(spec, GridSpaceSpec):
        return MetricSpace.grid_space(spec.min, spec.max, spec.step, space_id=name)
    return MetricSpace(spec.coords, spec.distances, space_id=name)


def _build_measure(ctx: ScenarioContext, spec) -> Measure:
    space = ctx.space(spec.space)
    if spec.kind == "uniform":
        return Measure.uniform(space, spec.weight)
    if spec.kind == "dirac":
        if spec.point is None:
            raise TransfunctionError("dirac measures need a point")
        return Measure.dirac(space, spec.point, spec.weight)
    if spec.kind == "dense":
        return Measure(space, spec.weights or [])
    weights = spec.weights or {}
    if isinstance(weights, list):
        raise TransfunctionError("sparse measures take an {id: weight} object")
    return Measure.from_sparse(space, {int(k): v for k, v in weights.items()})


def build_map(spec: MapSpec, domain: MetricSpace, codomain: MetricSpace) -> np.ndarray:
    if spec.mapping is not None:
        return Pushforward(domain, codomain, spec.mapping).mapping
    return build_grid_map(spec.name, spec.params, domain, codomain)


def build_kernel(spec: KernelSpec, space: MetricSpace) -> Kernel:
    if spec.shape == "uniform":
        return Kernel.uniform(space, spec.radius, spec.mass)
    if spec.shape == "hat":
        return Kernel.hat(space, spec.radius, spec.mass)
    if spec.shape == "dirac":
        return Kernel.dirac(space, spec.mass)
    return Kernel.from_displacements(space, spec.displacements, spec.weights)


def _projection_points(space: MetricSpace, spec: ProjectionSpec) -> PointSet:
    if spec.points is not None:
        return PointSet(space, tuple(spec.points))
    lo = np.asarray(spec.box_min if spec.box_min is not None else space.coords.min(axis=0))
    hi = np.asarray(spec.box_max if spec.box_max is not None else space.coords.max(axis=0))
    inside = np.all((space.coords >= lo - space.tol) & (space.coords <= hi + space.tol), axis=1)
    return PointSet.from_mask(space, inside)


def _build_transfunction(ctx: ScenarioContext, name: str, pending: set[str]) -> Transfunction:
    if name in ctx.transfunctions:
        return ctx.transfunctions[name]
    specs = ctx.scenario.transfunctions
    if name not in specs:
        raise ctx.fail(f"unknown transfunction: {name}", name)
    if name in pending:
        raise ctx.fail(f"transfunction {name} refers to itself", name)
    pending.add(name)
    spec = specs[name]

    def ref(other: str) -> Transfunction:
        return _build_transfunction(ctx, other, pending)

    match spec:
        case PushforwardSpec():
            domain = ctx.space(spec.domain)
            codomain = ctx.space(spec.codomain or spec.domain)
            phi: Transfunction = Pushforward(domain, codomain, build_map(spec.map, domain, codomain))
        case ProjectionSpec():
            phi = Projection(_projection_points(ctx.space(spec.space), spec))
        case ConvolutionSpec():
            space = ctx.space(spec.space)
            phi = Convolution(space, build_kernel(spec.kernel, space), spec.boundary)
        case DensityScaleSpec():
            inner = ref(spec.inner)
            density = spec.density
            if isinstance(density, float | int):
                density = np.full(inner.codomain.size, float(density))
            phi = DensityScale(inner, density)
        case GraphInducedSpec():
            phi = GraphInduced(ctx.graph(spec.graph), ctx.measure(spec.lam))
        case RankOneSpec():
            phi = RankOne(ctx.space(spec.domain), ctx.measure(spec.nu))
        case MatrixSpec():
            phi = MatrixTransfunction(ctx.space(spec.domain), ctx.space(spec.codomain), np.asarray(spec.matrix))
        case MarkovInducedSpec():
            phi = markov_to_transfunction(ctx.markov_matrix(spec.markov))
        case CompositionSpec():
            phi = Composition([ref(stage) for stage in spec.stages])
    pending.discard(name)
    ctx.transfunctions[name] = phi
    return phi


def build_context(scenario: Scenario, source: str = "") -> ScenarioContext:
    """Resolve every named object of a scenario.

    Raises:
        ScenarioError: Unresolved references or invalid object parameters
    """
    ctx = ScenarioContext(scenario, source)
    stage, current = "space", ""
    try:
        for current, spec in scenario.spaces.items():
            ctx.spaces[current] = _build_space(current, spec)
        stage = "measure"
        for current, spec in scenario.measures.items():
            ctx.measures[current] = _build_measure(ctx, spec)
        stage = "graph"
        for current, spec in scenario.graphs.items():
            ctx.graphs[current] = _build_graph(ctx, spec)
        stage = "Markov operator"
        for current, spec in scenario.markov.items():
            mu, nu = ctx.measure(spec.mu), ctx.measure(spec.nu)
            if spec.matrix is not None:
                ctx.markov[current] = MarkovMatrix(mu, nu, np.asarray(spec.matrix))
            else:
                ctx.markov[current] = markov_from_plan(TransportPlan(np.asarray(spec.plan), mu, nu))
        stage = "transfunction"
        for current in scenario.transfunctions:
            _build_transfunction(ctx, current, set())
        if scenario.popdyn is not None:
            stage, current = "popdyn section", "popdyn"
            ctx.population = _build_population(ctx, scenario.popdyn)
        stage = "analysis"
        for analysis in scenario.analyses:
            current = analysis.kind
            _check_references(ctx, analysis)
    except ScenarioError:
        raise
    except TransfunctionError as e:
        raise ctx.fail(f"{stage} {current}: {e}", current) from e
    logger.debug(
        "scenario %s: %d spaces, %d transfunctions", scenario.name, len(ctx.spaces), len(ctx.transfunctions)
    )
    return ctx


def _build_graph(ctx: ScenarioContext, spec) -> GraphCarrier:
    domain = ctx.space(spec.domain)
    codomain = ctx.space(spec.codomain or spec.domain)
    if spec.kind == "empty":
        return GraphCarrier.empty(domain, codomain)
    if spec.kind == "full":
        return GraphCarrier.full(domain, codomain)
    if spec.kind == "pairs":
        return GraphCarrier.from_pairs(domain, codomain, spec.pairs or [])
    if spec.map is None:
        raise TransfunctionError(f"{spec.kind} graphs need a map")
    mapping = build_map(spec.map, domain, codomain)
    if spec.kind == "exact":
        return exact_graph(mapping, domain, codomain)
    if spec.epsilon is None:
        raise TransfunctionError("band graphs need an epsilon")
    return fat_graph(mapping, spec.epsilon, domain, codomain)


def _build_population(ctx: ScenarioContext, spec) -> PopulationModel:
    space = ctx.space(spec.space)
    initial = ctx.measure(spec.initial)
    if initial.space is not space:
        raise TransfunctionError("initial population must live on the model grid")
    return PopulationModel(
        space=space,
        migration=build_map(spec.migration, space, space),
        kernel=build_kernel(spec.kernel, space),
        growth=np.asarray(spec.growth, dtype=float),
        order=spec.order,
    )


def _check_references(ctx: ScenarioContext, analysis: Any) -> None:
    for attr, lookup in (
        ("transfunction", ctx.transfunction),
        ("graph", ctx.graph),
        ("markov", ctx.markov_matrix),
    ):
        name = getattr(analysis, attr, None)
        if isinstance(name, str):
            lookup(name)
    for name in getattr(analysis, "subjects", None) or []:
        ctx.transfunction(name)
    if analysis.kind == "popdyn" and ctx.population is None:
        raise ctx.fail("popdyn analysis without a popdyn section", "popdyn")


def load_context(path: str | Path | None) -> ScenarioContext:
    scenario, source = load_scenario(path)
    return build_context(scenario, source)
