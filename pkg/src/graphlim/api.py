"""HTTP service wrapping the limit algebra, sampler and experiment drivers.

Every endpoint is stateless and pure given its request body, so the
service is safe for concurrent clients. Request/response bodies mirror
the package's JSON wire forms one to one; stochastic endpoints take an
explicit seed and return byte-identical payloads for identical requests.

Run with: uvicorn graphlim.api:app
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .catalog import enumerate_connected
from .cuts import EXACT_CUT_MAX_VERTICES, balanced_cut_heuristic, min_balanced_cut_exact
from .errors import EnumerationBudgetError, InvariantError
from .experiments import (
    ExperimentConfig,
    run_components_experiment,
    run_cut_experiment,
    run_density_fingerprint_experiment,
    run_sum_convergence_experiment,
)
from .graphs import Graph, cut_distance_iso, cut_norm_distance
from .kernels import StepKernel, fingerprint
from .limits import (
    GraphLimit,
    Step,
    Sum,
    Zero,
    decompose_limit,
    is_connected_limit,
    largest_component_weight,
    limit_density,
    realize,
)
from .sampling import sample_graph

app = FastAPI(
    title="graphlim",
    description="Step-kernel graph limits: direct sums, components, sampling, experiments",
)


# ---------------------------------------------------------------------------
# Wire models
# ---------------------------------------------------------------------------

class GraphModel(BaseModel):
    n: int
    edges: list[tuple[int, int]] = Field(default_factory=list)

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)

    @staticmethod
    def from_graph(g: Graph) -> "GraphModel":
        return GraphModel(n=g.n, edges=[tuple(e) for e in g.sorted_edges()])


class KernelModel(BaseModel):
    weights: list[float]
    values: list[list[float]]

    def to_kernel(self) -> StepKernel:
        return StepKernel.from_json_dict(self.model_dump())

    @staticmethod
    def from_kernel(k: StepKernel) -> "KernelModel":
        return KernelModel(**k.to_json_dict())


class ZeroLimitModel(BaseModel):
    type: Literal["zero"]


class StepLimitModel(BaseModel):
    type: Literal["step"]
    kernel: KernelModel


class SumLimitModel(BaseModel):
    type: Literal["sum"]
    terms: list["SumTermModel"]


LimitModel = Union[ZeroLimitModel, StepLimitModel, SumLimitModel]


class SumTermModel(BaseModel):
    alpha: float
    limit: "LimitModel"


SumLimitModel.model_rebuild()
SumTermModel.model_rebuild()


def to_limit(model: LimitModel) -> GraphLimit:
    if isinstance(model, ZeroLimitModel):
        return Zero()
    if isinstance(model, StepLimitModel):
        return Step(kernel=model.kernel.to_kernel())
    return Sum(terms=tuple((t.alpha, to_limit(t.limit)) for t in model.terms))


class DecompositionPartModel(BaseModel):
    alpha: float
    kernel: KernelModel


class DecompositionModel(BaseModel):
    parts: list[DecompositionPartModel]
    deficit: float


class FingerprintModel(BaseModel):
    catalog_k: int
    values: list[float]


class CutResultModel(BaseModel):
    side: list[int]
    cut_edges: int
    density: float
    balance: float
    method: str


class SampleModel(BaseModel):
    n: int
    edges: list[tuple[int, int]]
    labels: list[int]


# ---------------------------------------------------------------------------
# Requests
# ---------------------------------------------------------------------------

class DensityRequest(BaseModel):
    limit: LimitModel
    graph: GraphModel


class DensityResponse(BaseModel):
    density: float


class SumRequest(BaseModel):
    terms: list[SumTermModel]


class LimitRequest(BaseModel):
    limit: LimitModel


class ConnectedResponse(BaseModel):
    connected: bool


class LargestWeightResponse(BaseModel):
    largest_component_weight: float


class FingerprintRequest(BaseModel):
    limit: LimitModel
    k: int = 4


class SampleRequest(BaseModel):
    limit: LimitModel
    n: int
    seed: int


class CutNormRequest(BaseModel):
    graph_a: GraphModel
    graph_b: GraphModel
    up_to_isomorphism: bool = False


class DistanceResponse(BaseModel):
    distance: float


class MinCutRequest(BaseModel):
    graph: GraphModel
    delta: float = 0.3
    seed: Optional[int] = None


class ExperimentRequest(BaseModel):
    limit: LimitModel
    n_values: list[int]
    reps: int = 20
    seed: int
    delta: float = 0.3
    catalog_k: int = 4
    noise: tuple[float, float] = (0.0, 0.0)
    limit_b: Optional[LimitModel] = None
    abs_tolerance: float = 0.03
    stderr_multiplier: float = 4.0
    cut_threshold: Optional[float] = None
    cut_disconnected_bound: float = 0.01
    freq_reps: int = 10_000
    graph: Optional[GraphModel] = None  # sum-convergence test graph
    alpha: Optional[float] = None  # sum-convergence split

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(
            limit=to_limit(self.limit),
            n_values=tuple(self.n_values),
            reps=self.reps,
            seed=self.seed,
            delta=self.delta,
            catalog_k=self.catalog_k,
            noise=self.noise,
            limit_b=to_limit(self.limit_b) if self.limit_b is not None else Zero(),
            abs_tolerance=self.abs_tolerance,
            stderr_multiplier=self.stderr_multiplier,
            cut_threshold=self.cut_threshold,
            cut_disconnected_bound=self.cut_disconnected_bound,
            freq_reps=self.freq_reps,
        )


# ---------------------------------------------------------------------------
# Endpoints
# ---------------------------------------------------------------------------

@app.exception_handler(ValueError)
async def _value_error(_, exc: ValueError):
    raise HTTPException(status_code=400, detail=str(exc))


@app.exception_handler(EnumerationBudgetError)
async def _budget_error(_, exc: EnumerationBudgetError):
    raise HTTPException(status_code=400, detail=f"budget exceeded: {exc}")


@app.exception_handler(InvariantError)
async def _invariant_error(_, exc: InvariantError):
    raise HTTPException(status_code=500, detail=f"internal invariant violated: {exc}")


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/density", response_model=DensityResponse)
def density(req: DensityRequest) -> DensityResponse:
    return DensityResponse(density=limit_density(req.graph.to_graph(), to_limit(req.limit)))


@app.post("/sum", response_model=KernelModel)
def sum_limits(req: SumRequest) -> KernelModel:
    limit = Sum(terms=tuple((t.alpha, to_limit(t.limit)) for t in req.terms))
    return KernelModel.from_kernel(realize(limit))


@app.post("/decompose", response_model=DecompositionModel)
def decompose(req: LimitRequest) -> DecompositionModel:
    decomposition = decompose_limit(to_limit(req.limit))
    return DecompositionModel(
        parts=[
            DecompositionPartModel(alpha=alpha, kernel=KernelModel.from_kernel(k))
            for alpha, k in decomposition.parts
        ],
        deficit=decomposition.deficit,
    )


@app.post("/connected", response_model=ConnectedResponse)
def connected(req: LimitRequest) -> ConnectedResponse:
    return ConnectedResponse(connected=is_connected_limit(to_limit(req.limit)))


@app.post("/largest-component-weight", response_model=LargestWeightResponse)
def largest_weight(req: LimitRequest) -> LargestWeightResponse:
    return LargestWeightResponse(
        largest_component_weight=largest_component_weight(to_limit(req.limit))
    )


@app.post("/fingerprint", response_model=FingerprintModel)
def fingerprint_endpoint(req: FingerprintRequest) -> FingerprintModel:
    result = fingerprint(realize(to_limit(req.limit)), enumerate_connected(req.k))
    return FingerprintModel(catalog_k=result.catalog_k, values=list(result.values))


@app.post("/sample", response_model=SampleModel)
def sample(req: SampleRequest) -> SampleModel:
    result = sample_graph(realize(to_limit(req.limit)), req.n, req.seed)
    return SampleModel(
        n=result.graph.n,
        edges=[tuple(e) for e in result.graph.sorted_edges()],
        labels=list(result.labels),
    )


@app.post("/cutnorm", response_model=DistanceResponse)
def cutnorm(req: CutNormRequest) -> DistanceResponse:
    ga, gb = req.graph_a.to_graph(), req.graph_b.to_graph()
    value = cut_distance_iso(ga, gb) if req.up_to_isomorphism else cut_norm_distance(ga, gb)
    return DistanceResponse(distance=value)


@app.post("/mincut", response_model=CutResultModel)
def mincut(req: MinCutRequest) -> CutResultModel:
    graph = req.graph.to_graph()
    if graph.n <= EXACT_CUT_MAX_VERTICES:
        result = min_balanced_cut_exact(graph, req.delta)
    else:
        if req.seed is None:
            raise ValueError(
                f"seed is required for the heuristic (n={graph.n} > {EXACT_CUT_MAX_VERTICES})"
            )
        result = balanced_cut_heuristic(graph, req.delta, req.seed)
    return CutResultModel(**result.to_json_dict())


@app.post("/experiments/components")
def experiment_components(req: ExperimentRequest) -> dict:
    return run_components_experiment(req.to_config()).to_json_dict()


@app.post("/experiments/cut")
def experiment_cut(req: ExperimentRequest) -> dict:
    return run_cut_experiment(req.to_config()).to_json_dict()


@app.post("/experiments/sum-convergence")
def experiment_sum_convergence(req: ExperimentRequest) -> dict:
    if req.graph is None or req.alpha is None:
        raise ValueError('sum-convergence needs "graph" and "alpha" fields')
    return run_sum_convergence_experiment(
        req.to_config(), req.graph.to_graph(), req.alpha
    ).to_json_dict()


@app.post("/experiments/fingerprint")
def experiment_fingerprint(req: ExperimentRequest) -> dict:
    return run_density_fingerprint_experiment(req.to_config()).to_json_dict()
