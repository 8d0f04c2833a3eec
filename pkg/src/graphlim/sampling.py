"""Seeded sampling of kernel-random graphs and component statistics.

A sample on n vertices draws one block label per vertex i.i.d. from the
kernel's weight vector, then makes each pair {i, j} an edge independently
with probability values[label_i, label_j]. Everything is a deterministic
function of (kernel, n, seed): labels are drawn first, then the pair
uniforms row by row (i ascending, j > i ascending) from the PCG64 stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EnumerationBudgetError
from .graphs import (
    Graph,
    HOM_ENUMERATION_BUDGET,
    components,
    hom_count,
    hom_density_graph,
)
from .kernels import StepKernel
from .rng import derive_seed, generator

SMALL_PATTERN_VERTICES = 3  # closed-form density evaluation up to this size
DEFAULT_MAPPING_SAMPLES = 200_000


@dataclass(frozen=True)
class LabeledSample:
    """A sampled graph together with the block label drawn for each vertex."""

    graph: Graph
    labels: tuple[int, ...]

    def to_json_dict(self) -> dict:
        data = self.graph.to_json_dict()
        data["labels"] = list(self.labels)
        return data


@dataclass(frozen=True)
class ComponentStats:
    """Component summary of one sample; all fractions are relative to n."""

    n: int
    largest_fraction: float
    isolated_fraction: float
    sorted_densities: tuple[float, ...]
    vertex1_isolated: bool  # the first vertex (index 0) has degree 0


def sample_graph(w: StepKernel, n: int, seed: int) -> LabeledSample:
    """Draw one n-vertex sample of the kernel; deterministic given the seed."""
    if n < 1:
        raise ValueError(f"sample size must be positive, got {n}")
    gen = generator(seed)
    labels = gen.choice(w.num_blocks, size=n, p=w.weights)
    heads: list[np.ndarray] = []
    tails: list[np.ndarray] = []
    for i in range(n - 1):
        probs = w.values[labels[i], labels[i + 1:]]
        hits = np.nonzero(gen.random(n - 1 - i) < probs)[0]
        if hits.size:
            heads.append(np.full(hits.size, i, dtype=np.int64))
            tails.append(hits.astype(np.int64) + i + 1)
    if heads:
        edge_arr = np.column_stack([np.concatenate(heads), np.concatenate(tails)])
    else:
        edge_arr = np.empty((0, 2), dtype=np.int64)
    graph = Graph(n, frozenset(map(tuple, edge_arr.tolist())))
    # rows were generated in lexicographic order; prefill the cache
    edge_arr.setflags(write=False)
    graph.__dict__["edge_array"] = edge_arr
    return LabeledSample(graph=graph, labels=tuple(int(x) for x in labels))


def component_stats(sample: LabeledSample) -> ComponentStats:
    """Exact component statistics of a sampled graph."""
    g = sample.graph
    sizes = sorted((len(c) for c in components(g)), reverse=True)
    densities = tuple(s / g.n for s in sizes)
    degrees = g.degrees()
    return ComponentStats(
        n=g.n,
        largest_fraction=densities[0],
        isolated_fraction=float(np.count_nonzero(degrees == 0)) / g.n,
        sorted_densities=densities,
        vertex1_isolated=bool(degrees[0] == 0),
    )


def subgraph_frequency(w: StepKernel, f: Graph, k: int, reps: int, seed: int) -> float:
    """Fraction of replicates in which a k-vertex sample contains f.

    Containment is edge-set containment with fixed labels on [k], so the
    frequency estimates the probability that the sample includes every
    edge of f.
    """
    if f.n != k:
        raise ValueError(f"pattern has {f.n} vertices but k={k}")
    if reps < 1:
        raise ValueError(f"reps must be positive, got {reps}")
    hits = 0
    for r in range(reps):
        sample = sample_graph(w, k, derive_seed(seed, r))
        if f.edges <= sample.graph.edges:
            hits += 1
    return hits / reps


def empirical_density(
    f: Graph,
    g: Graph,
    *,
    seed: int | None = None,
    mapping_samples: int = DEFAULT_MAPPING_SAMPLES,
) -> float:
    """Density t(f, g), switching evaluation strategy by cost.

    Patterns on <= 3 vertices are evaluated exactly through adjacency
    products at any n; larger patterns are exact while n**v(f) stays
    within the enumeration budget, and beyond that are estimated from
    uniformly random mappings (requires a seed; the standard error is
    ~ (t(1-t)/mapping_samples)**0.5).
    """
    if f.edge_count == 0:
        return 1.0
    if f.n <= SMALL_PATTERN_VERTICES:
        return hom_count(f, g) / g.n**f.n
    if g.n**f.n <= HOM_ENUMERATION_BUDGET:
        return hom_density_graph(f, g)
    if seed is None:
        raise EnumerationBudgetError(
            f"exact density needs {g.n}**{f.n} map evaluations; pass a seed "
            f"to estimate from random mappings instead"
        )
    gen = generator(seed)
    adjacency = g.adjacency
    assignment = gen.integers(0, g.n, size=(mapping_samples, f.n))
    indicator = np.ones(mapping_samples, dtype=np.float64)
    for u, v in f.sorted_edges():
        indicator *= adjacency[assignment[:, u], assignment[:, v]]
    return float(indicator.mean())


def density_convergence(
    w: StepKernel, f: Graph, n: int, reps: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo mean and standard error of t(f, G(n, w)) over replicates."""
    if reps < 1:
        raise ValueError(f"reps must be positive, got {reps}")
    values = np.empty(reps)
    for r in range(reps):
        rep_seed = derive_seed(seed, r)
        sample = sample_graph(w, n, rep_seed)
        values[r] = empirical_density(f, sample.graph, seed=derive_seed(rep_seed, 1))
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(reps)) if reps > 1 else 0.0
    return mean, stderr
