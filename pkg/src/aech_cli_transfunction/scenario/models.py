"""Pydantic schema for scenario files."""

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# Spaces

class GridSpaceSpec(_Strict):
    """Regular grid from per-axis min/max/step."""

    kind: Literal["grid"] = "grid"
    min: list[float] = Field(min_length=1, description="Lower corner per axis")
    max: list[float] = Field(min_length=1, description="Upper corner per axis")
    step: list[float] = Field(min_length=1, description="Grid step per axis")


class PointsSpaceSpec(_Strict):
    """Explicit point cloud, Euclidean or with a distance table."""

    kind: Literal["points"] = "points"
    coords: list[list[float]] = Field(min_length=1, description="One coordinate row per point")
    distances: list[list[float]] | None = Field(default=None, description="Optional custom metric")


SpaceSpec = Annotated[GridSpaceSpec | PointsSpaceSpec, Field(discriminator="kind")]


# Measures

class MeasureSpec(_Strict):
    """A measure on a named space: sparse weights, uniform, or a Dirac mass."""

    space: str = Field(description="Space name")
    kind: Literal["sparse", "uniform", "dirac", "dense"] = Field(default="sparse")
    weights: dict[str, float] | list[float] | None = Field(
        default=None, description="Sparse {id: weight} or dense list, by kind"
    )
    weight: float = Field(default=1.0, description="Uniform weight or Dirac mass")
    point: int | None = Field(default=None, description="Dirac location")


# Maps and kernels

class MapSpec(_Strict):
    """A grid map: a named builder with parameters, or an explicit id table."""

    name: str | None = Field(default=None, description="Builder name, e.g. identity, heaviside")
    params: dict[str, Any] = Field(default_factory=dict, description="Builder parameters")
    mapping: list[int] | None = Field(default=None, description="Explicit codomain id per domain point")

    @model_validator(mode="after")
    def _one_source(self) -> "MapSpec":
        if (self.name is None) == (self.mapping is None):
            raise ValueError("a map needs exactly one of 'name' or 'mapping'")
        return self


class KernelSpec(_Strict):
    """Dispersal or convolution kernel on the grid lattice."""

    shape: Literal["uniform", "hat", "dirac", "explicit"] = "uniform"
    radius: float | None = Field(default=None, gt=0.0, description="Open-ball radius for uniform and hat")
    mass: float = Field(default=1.0, ge=0.0, description="Total kernel mass")
    displacements: list[list[float]] | list[float] | None = Field(default=None, description="Explicit displacements")
    weights: list[float] | None = Field(default=None, description="Explicit weights")

    @model_validator(mode="after")
    def _complete(self) -> "KernelSpec":
        if self.shape in ("uniform", "hat") and self.radius is None:
            raise ValueError(f"{self.shape} kernels need a radius")
        if self.shape == "explicit" and (self.displacements is None or self.weights is None):
            raise ValueError("explicit kernels need displacements and weights")
        return self


# Transfunctions

class PushforwardSpec(_Strict):
    kind: Literal["pushforward"]
    domain: str
    codomain: str | None = Field(default=None, description="Defaults to the domain")
    map: MapSpec


class ProjectionSpec(_Strict):
    kind: Literal["projection"]
    space: str
    points: list[int] | None = Field(default=None, description="Ids of A")
    box_min: list[float] | None = Field(default=None, description="Lower corner of a box A")
    box_max: list[float] | None = Field(default=None, description="Upper corner of a box A")


class ConvolutionSpec(_Strict):
    kind: Literal["convolution"]
    space: str
    kernel: KernelSpec
    boundary: Literal["clamp", "truncate"] = "clamp"


class DensityScaleSpec(_Strict):
    kind: Literal["density_scale"]
    inner: str = Field(description="Transfunction applied first")
    density: float | list[float] = Field(description="Constant or per-point rate g")


class GraphInducedSpec(_Strict):
    kind: Literal["graph_induced"]
    graph: str
    lam: str = Field(description="Measure on the codomain")


class RankOneSpec(_Strict):
    kind: Literal["rank_one"]
    domain: str
    nu: str = Field(description="Target measure")


class MatrixSpec(_Strict):
    kind: Literal["matrix"]
    domain: str
    codomain: str
    matrix: list[list[float]]


class MarkovInducedSpec(_Strict):
    kind: Literal["markov"]
    markov: str = Field(description="Markov operator name")


class CompositionSpec(_Strict):
    kind: Literal["composition"]
    stages: list[str] = Field(min_length=1, description="Applied left to right")


TransfunctionSpec = Annotated[
    PushforwardSpec
    | ProjectionSpec
    | ConvolutionSpec
    | DensityScaleSpec
    | GraphInducedSpec
    | RankOneSpec
    | MatrixSpec
    | MarkovInducedSpec
    | CompositionSpec,
    Field(discriminator="kind"),
]


# Graphs and Markov operators

class GraphSpec(_Strict):
    """A relation: explicit pairs, the exact graph of a map, or a band around it."""

    kind: Literal["pairs", "exact", "band", "empty", "full"]
    domain: str
    codomain: str | None = None
    pairs: list[tuple[int, int]] | None = None
    map: MapSpec | None = None
    epsilon: float | None = Field(default=None, ge=0.0, description="Band half-width")


class MarkovSpec(_Strict):
    """A Markov matrix M (rows Y, columns X) or a transport plan (rows X, columns Y)."""

    mu: str
    nu: str
    matrix: list[list[float]] | None = None
    plan: list[list[float]] | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "MarkovSpec":
        if (self.matrix is None) == (self.plan is None):
            raise ValueError("a Markov operator needs exactly one of 'matrix' or 'plan'")
        return self


class PopdynSpec(_Strict):
    space: str
    migration: MapSpec
    kernel: KernelSpec
    growth: float | list[float] = 1.0
    initial: str = Field(description="Initial measure name")
    steps: int = Field(default=10, ge=0)
    order: Literal["migrate_first", "disperse_first"] = "migrate_first"


# Analyses

class LocalizeAnalysis(_Strict):
    kind: Literal["localize"]
    transfunction: str
    delta_min: float | None = Field(default=None, gt=0.0)
    epsilon: float | None = Field(default=None, ge=0.0, description="Also compute D_eps and uniformity")


class ApproxAnalysis(_Strict):
    kind: Literal["approx"]
    transfunction: str
    method: Literal["sigma_simple", "nonuniform", "recover"] = "sigma_simple"
    delta: float | None = Field(default=None, gt=0.0)
    epsilon: float | None = Field(default=None, ge=0.0)
    beta: float | None = Field(default=None, gt=0.0, description="Mollifier bump radius")
    delta_min: float | None = Field(default=None, gt=0.0)
    verify: bool = Field(default=True, description="Compare Phi with f_# by sampling")


class GraphsAnalysis(_Strict):
    kind: Literal["graphs"]
    graph: str
    transfunction: str
    expect: bool = Field(default=True, description="Expected carrier outcome")


class MarkovAnalysis(_Strict):
    kind: Literal["markov"]
    markov: str
    cost: str | None = Field(default=None, description="'metric' or a CSV cost table path")


class PopdynAnalysis(_Strict):
    kind: Literal["popdyn"]


class VerifyAnalysis(_Strict):
    kind: Literal["verify"]
    subjects: list[str] | None = Field(default=None, description="Transfunction names (all when omitted)")
    checks: list[str] | None = Field(default=None, description="Registered check names (all applicable when omitted)")
    epsilon: float | None = Field(default=None, ge=0.0, description="Localization budget")
    expect: dict[str, bool] = Field(default_factory=dict, description="Expected outcome per check name")


Analysis = Annotated[
    LocalizeAnalysis | ApproxAnalysis | GraphsAnalysis | MarkovAnalysis | PopdynAnalysis | VerifyAnalysis,
    Field(discriminator="kind"),
]

ANALYSIS_KINDS = ("localize", "approx", "graphs", "markov", "popdyn", "verify")


class Scenario(_Strict):
    """A complete scenario file."""

    name: str = Field(default="scenario", description="Prefix for report files")
    spaces: dict[str, SpaceSpec] = Field(min_length=1)
    measures: dict[str, MeasureSpec] = Field(default_factory=dict)
    transfunctions: dict[str, TransfunctionSpec] = Field(default_factory=dict)
    graphs: dict[str, GraphSpec] = Field(default_factory=dict)
    markov: dict[str, MarkovSpec] = Field(default_factory=dict)
    popdyn: PopdynSpec | None = None
    analyses: list[Analysis] = Field(min_length=1)
    output_dir: str | None = Field(default=None, description="Report directory (overridden by --out)")
