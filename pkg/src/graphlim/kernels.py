"""Step kernels (block graphons): construction, direct sums, connectedness,
component decomposition, and exact homomorphism densities.

A step kernel is a symmetric [0,1]-valued function that is constant on
the blocks of a finite partition of a probability space; it is stored as
the block weight vector plus the block-value matrix. Every operation is
an exact finite sum, and "zero almost everywhere" on a block pair means
exactly values[i][j] == 0 (no epsilon threshold).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .catalog import DEFAULT_CATALOG_K, TestGraphCatalog, enumerate_connected
from .errors import EnumerationBudgetError
from .graphs import Graph, _LETTERS

WEIGHT_SUM_TOLERANCE = 1e-9
KERNEL_ENUMERATION_BUDGET = 10**8


@dataclass(frozen=True, eq=False)
class StepKernel:
    """Block graphon: positive block weights summing to 1, symmetric values in [0,1]."""

    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty vector")
        if v.shape != (w.size, w.size):
            raise ValueError(f"values must be {w.size}x{w.size}, got {v.shape}")
        if np.any(w <= 0):
            raise ValueError("block weights must be strictly positive")
        if abs(float(w.sum()) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"block weights must sum to 1, got {float(w.sum())!r}")
        if not np.array_equal(v, v.T):
            raise ValueError("block values must be symmetric")
        if np.any(v < 0) or np.any(v > 1):
            raise ValueError("block values must lie in [0, 1]")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "values", v)

    @property
    def num_blocks(self) -> int:
        return int(self.weights.size)

    def to_json_dict(self) -> dict:
        return {
            "weights": [float(x) for x in self.weights],
            "values": [[float(x) for x in row] for row in self.values],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "StepKernel":
        if not isinstance(data, dict) or "weights" not in data or "values" not in data:
            raise ValueError('kernel JSON must have the form {"weights": [...], "values": [[...]]}')
        return make_step_kernel(data["weights"], data["values"])


def make_step_kernel(weights: Sequence[float], values: Sequence[Sequence[float]]) -> StepKernel:
    """Validate and normalize raw block data into a StepKernel.

    Zero-weight blocks are dropped (with their rows and columns); the
    remaining weights must sum to 1 within 1e-9 and are renormalized to
    machine-exact total 1.
    """
    w = np.asarray(weights, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty vector")
    if v.shape != (w.size, w.size):
        raise ValueError(f"values must be {w.size}x{w.size}, got {v.shape}")
    if np.any(w < 0):
        raise ValueError("block weights must be nonnegative")
    if not np.array_equal(v, v.T):
        raise ValueError("block values must be symmetric")
    keep = w > 0
    if not np.any(keep):
        raise ValueError("at least one block must have positive weight")
    w = w[keep]
    v = v[np.ix_(keep, keep)]
    total = float(w.sum())
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise ValueError(
            f"block weights must sum to 1 within {WEIGHT_SUM_TOLERANCE}, got {total!r}"
        )
    return StepKernel(weights=w / total, values=v)


def constant_kernel(p: float) -> StepKernel:
    """One-block kernel with constant value p; p=0 is the zero kernel."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"constant value must be in [0, 1], got {p}")
    return StepKernel(weights=np.array([1.0]), values=np.array([[p]]))


def zero_kernel() -> StepKernel:
    return constant_kernel(0.0)


def graph_as_kernel(g: Graph) -> StepKernel:
    """Embed a graph as a step kernel: n equal blocks, 0/1 values, zero diagonal."""
    weights = np.full(g.n, 1.0 / g.n)
    return StepKernel(weights=weights, values=g.adjacency.copy())


def direct_sum_kernels(terms: Iterable[tuple[float, StepKernel]]) -> StepKernel:
    """Weighted block-diagonal assembly of step kernels.

    Term i contributes blocks with weights alpha_i * mu_ij and zero values
    against every other term. Zero-alpha terms are dropped. If the alphas
    sum to less than 1 (beyond tolerance) one extra zero block carries the
    missing mass, so the result is always a complete kernel; an empty term
    list yields the zero kernel.
    """
    materialized = []
    for alpha, kernel in terms:
        alpha = float(alpha)
        if alpha < 0:
            raise ValueError(f"term weight must be nonnegative, got {alpha}")
        if alpha > 0:
            materialized.append((alpha, kernel))
    total = sum(alpha for alpha, _ in materialized)
    if total > 1.0 + WEIGHT_SUM_TOLERANCE:
        raise ValueError(f"term weights must sum to at most 1, got {total!r}")
    deficit = 1.0 - total
    sizes = [k.num_blocks for _, k in materialized]
    m = sum(sizes) + (1 if deficit > WEIGHT_SUM_TOLERANCE else 0)
    if m == 0:
        return zero_kernel()
    weights = np.zeros(m)
    values = np.zeros((m, m))
    offset = 0
    for (alpha, kernel), size in zip(materialized, sizes):
        weights[offset:offset + size] = alpha * kernel.weights
        values[offset:offset + size, offset:offset + size] = kernel.values
        offset += size
    if deficit > WEIGHT_SUM_TOLERANCE:
        weights[offset] = deficit
    return make_step_kernel(weights, values)


# ---------------------------------------------------------------------------
# Connectedness and component decomposition
# ---------------------------------------------------------------------------

def _block_classes(w: StepKernel) -> list[list[int]]:
    """Union-find classes of blocks linked by positive off-diagonal values."""
    m = w.num_blocks
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(m):
        for j in range(i + 1, m):
            if w.values[i, j] > 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    classes: dict[int, list[int]] = {}
    for i in range(m):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values())


def is_connected_kernel(w: StepKernel) -> bool:
    """A one-block kernel is connected iff its value is positive; otherwise
    iff the blocks form one class under positive off-diagonal values."""
    if w.num_blocks == 1:
        return float(w.values[0, 0]) > 0
    return len(_block_classes(w)) == 1


@dataclass(frozen=True)
class ComponentDecomposition:
    """Connected parts (alpha_i, kernel_i) plus the deficit mass alpha_0.

    The alphas and deficit sum to 1; parts are sorted by decreasing alpha
    with exact ties broken by the lexicographic order of the parts'
    density fingerprints at the default catalog size.
    """

    parts: tuple[tuple[float, StepKernel], ...]
    deficit: float

    def alphas(self) -> tuple[float, ...]:
        return tuple(alpha for alpha, _ in self.parts)

    def to_json_dict(self) -> dict:
        return {
            "parts": [
                {"alpha": float(alpha), "kernel": kernel.to_json_dict()}
                for alpha, kernel in self.parts
            ],
            "deficit": float(self.deficit),
        }


def _restrict(w: StepKernel, blocks: list[int]) -> tuple[float, StepKernel]:
    idx = np.array(blocks, dtype=np.int64)
    mass = float(w.weights[idx].sum())
    kernel = StepKernel(weights=w.weights[idx] / mass, values=w.values[np.ix_(idx, idx)])
    return mass, kernel


def decompose_kernel(w: StepKernel) -> ComponentDecomposition:
    """Split a step kernel into connected parts plus a single deficit scalar.

    Block classes under positive off-diagonal values become parts after
    weight renormalization; a singleton class with zero diagonal has an
    all-zero row and is folded into the deficit instead.
    """
    parts: list[tuple[float, StepKernel]] = []
    deficit = 0.0
    for blocks in _block_classes(w):
        if len(blocks) == 1 and w.values[blocks[0], blocks[0]] == 0:
            deficit += float(w.weights[blocks[0]])
            continue
        parts.append(_restrict(w, blocks))
    parts.sort(key=lambda part: -part[0])
    _break_alpha_ties(parts)
    return ComponentDecomposition(parts=tuple(parts), deficit=deficit)


def _break_alpha_ties(parts: list[tuple[float, StepKernel]]) -> None:
    """Reorder runs of exactly-equal alphas by fingerprint, in place."""
    i = 0
    while i < len(parts):
        j = i + 1
        while j < len(parts) and parts[j][0] == parts[i][0]:
            j += 1
        if j - i > 1:
            catalog = enumerate_connected(DEFAULT_CATALOG_K)
            parts[i:j] = sorted(
                parts[i:j], key=lambda part: fingerprint(part[1], catalog).values
            )
        i = j


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------

def hom_density_kernel(f: Graph, w: StepKernel) -> float:
    """Exact homomorphism density of f in the kernel.

    The sum over all block assignments phi: V(f) -> blocks of
    prod_v mu[phi(v)] * prod_{uv in E(f)} values[phi(u), phi(v)],
    contracted with einsum.
    """
    if f.edge_count == 0:
        return 1.0
    total = w.num_blocks**f.n
    if total > KERNEL_ENUMERATION_BUDGET:
        raise EnumerationBudgetError(
            f"hom_density_kernel needs {w.num_blocks}**{f.n} = {total} assignments, "
            f"over the budget of {KERNEL_ENUMERATION_BUDGET}"
        )
    subs = [_LETTERS[v] for v in range(f.n)]
    subs += [_LETTERS[u] + _LETTERS[v] for u, v in f.sorted_edges()]
    operands = [w.weights] * f.n + [w.values] * f.edge_count
    return float(np.einsum(",".join(subs) + "->", *operands, optimize=True))


@dataclass(frozen=True)
class DensityFingerprint:
    """Densities against every catalog graph, in catalog order."""

    catalog_k: int
    values: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {"catalog_k": self.catalog_k, "values": [float(x) for x in self.values]}


def fingerprint(w: StepKernel, catalog: TestGraphCatalog) -> DensityFingerprint:
    return DensityFingerprint(
        catalog_k=catalog.max_vertices,
        values=tuple(hom_density_kernel(f, w) for f in catalog.graphs),
    )
