"""Graph limits as first-class values.

A limit is either the zero limit (the limit of empty graphs), a step
kernel, or a formal weighted direct sum of limits with total weight at
most 1. Every limit is realizable as a step kernel, and all structural
queries (components, connectedness, densities) go through that one
canonical form; the weighted-sum density recursion is kept as a second,
redundant evaluation route that is asserted against the first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import enumerate_connected
from .errors import InvariantError
from .graphs import Graph, is_connected_graph
from .kernels import (
    ComponentDecomposition,
    DensityFingerprint,
    StepKernel,
    WEIGHT_SUM_TOLERANCE,
    decompose_kernel,
    direct_sum_kernels,
    fingerprint,
    hom_density_kernel,
    zero_kernel,
)

ROUTE_AGREEMENT_TOLERANCE = 1e-12
FINGERPRINT_EQUALITY_TOLERANCE = 1e-9


class GraphLimit:
    """Base class for the tagged union Zero | Step | Sum."""

    def to_json_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(GraphLimit):
    """The limit of the empty graphs: density 0 against any graph with an edge."""

    def to_json_dict(self) -> dict:
        return {"type": "zero"}


@dataclass(frozen=True)
class Step(GraphLimit):
    """A limit given directly by a step kernel."""

    kernel: StepKernel

    def to_json_dict(self) -> dict:
        return {"type": "step", "kernel": self.kernel.to_json_dict()}


@dataclass(frozen=True)
class Sum(GraphLimit):
    """Formal weighted direct sum; weights are nonnegative with total <= 1."""

    terms: tuple[tuple[float, GraphLimit], ...]

    def __post_init__(self) -> None:
        total = 0.0
        for alpha, term in self.terms:
            if not isinstance(term, GraphLimit):
                raise ValueError(f"sum term must be a GraphLimit, got {type(term).__name__}")
            if float(alpha) < 0:
                raise ValueError(f"sum weight must be nonnegative, got {alpha}")
            total += float(alpha)
        if total > 1.0 + WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"sum weights must total at most 1, got {total!r}")

    def to_json_dict(self) -> dict:
        return {
            "type": "sum",
            "terms": [
                {"alpha": float(alpha), "limit": term.to_json_dict()}
                for alpha, term in self.terms
            ],
        }


def limit_from_json_dict(data: dict) -> GraphLimit:
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError('limit JSON must be a tagged object with a "type" field')
    kind = data["type"]
    if kind == "zero":
        return Zero()
    if kind == "step":
        if "kernel" not in data:
            raise ValueError('step limit JSON needs a "kernel" field')
        return Step(kernel=StepKernel.from_json_dict(data["kernel"]))
    if kind == "sum":
        if "terms" not in data or not isinstance(data["terms"], list):
            raise ValueError('sum limit JSON needs a "terms" list')
        terms = tuple(
            (float(item["alpha"]), limit_from_json_dict(item["limit"]))
            for item in data["terms"]
        )
        return Sum(terms=terms)
    raise ValueError(f"unknown limit type {kind!r}")


def realize(limit: GraphLimit) -> StepKernel:
    """Materialize a limit as a step kernel (block-diagonal for sums)."""
    if isinstance(limit, Zero):
        return zero_kernel()
    if isinstance(limit, Step):
        return limit.kernel
    if isinstance(limit, Sum):
        return direct_sum_kernels(
            (alpha, realize(term)) for alpha, term in limit.terms
        )
    raise ValueError(f"not a GraphLimit: {type(limit).__name__}")


def limit_density(f: Graph, limit: GraphLimit) -> float:
    """Density of f in the limit, with a built-in cross-check.

    The value is computed on the realized kernel. For sums evaluated
    against a connected f with at least one edge, the weighted-sum
    recursion sum_i alpha_i**v(f) * t(f, term_i) must agree within
    1e-12; a mismatch raises InvariantError.
    """
    value = hom_density_kernel(f, realize(limit))
    if isinstance(limit, Sum) and f.edge_count >= 1 and is_connected_graph(f):
        recursed = sum(
            alpha**f.n * limit_density(f, term) for alpha, term in limit.terms
        )
        if abs(recursed - value) > ROUTE_AGREEMENT_TOLERANCE:
            raise InvariantError(
                f"density routes disagree for f with {f.n} vertices: "
                f"realized {value!r} vs weighted-sum recursion {recursed!r}"
            )
    return value


def decompose_limit(limit: GraphLimit) -> ComponentDecomposition:
    """Connected components of the limit with their weights, plus deficit."""
    return decompose_kernel(realize(limit))


def is_connected_limit(limit: GraphLimit) -> bool:
    """True iff the decomposition is a single part of full weight."""
    decomposition = decompose_limit(limit)
    if len(decomposition.parts) != 1:
        return False
    alpha = decomposition.parts[0][0]
    return abs(alpha - 1.0) <= WEIGHT_SUM_TOLERANCE and (
        decomposition.deficit <= WEIGHT_SUM_TOLERANCE
    )


def largest_component_weight(limit: GraphLimit) -> float:
    """The largest part weight of the decomposition; 0 when there are no parts.

    This is also the limiting fraction of vertices in the largest
    component of samples of the limit.
    """
    decomposition = decompose_limit(limit)
    if not decomposition.parts:
        return 0.0
    return max(decomposition.alphas())


def limit_fingerprint(limit: GraphLimit, k: int) -> DensityFingerprint:
    return fingerprint(realize(limit), enumerate_connected(k))


def limits_equal_up_to(l1: GraphLimit, l2: GraphLimit, k: int) -> bool:
    """Fingerprint equality at catalog size k (a semi-decision: agreement at
    a finite k does not prove the limits equal in general)."""
    f1 = limit_fingerprint(l1, k)
    f2 = limit_fingerprint(l2, k)
    return all(
        abs(a - b) <= FINGERPRINT_EQUALITY_TOLERANCE
        for a, b in zip(f1.values, f2.values)
    )
