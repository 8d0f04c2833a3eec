"""Shared brute-force oracles and random-object helpers.

Every oracle here is deliberately independent of the package's
implementation choices: plain loops over mappings, permutations and
subsets, so the fast paths (einsum contractions, batched enumeration,
union-find) are checked against first-principles computations.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import numpy as np

from graphlim.graphs import Graph
from graphlim.kernels import StepKernel, make_step_kernel
from graphlim.rng import generator


# ---------------------------------------------------------------------------
# Graph oracles
# ---------------------------------------------------------------------------

def bfs_components(g: Graph) -> list[set[int]]:
    """Breadth-first-search component oracle."""
    neighbors: dict[int, set[int]] = {v: set() for v in range(g.n)}
    for i, j in g.edges:
        neighbors[i].add(j)
        neighbors[j].add(i)
    seen: set[int] = set()
    comps = []
    for start in range(g.n):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in neighbors[v]:
                if u not in comp:
                    comp.add(u)
                    queue.append(u)
        seen |= comp
        comps.append(comp)
    return comps


def brute_hom_density(f: Graph, g: Graph) -> float:
    """Exhaustive loop over all v(g)**v(f) mappings."""
    count = 0
    for phi in itertools.product(range(g.n), repeat=f.n):
        if all(g.has_edge(phi[u], phi[v]) for u, v in f.edges):
            count += 1
    return count / g.n**f.n


def are_isomorphic(g: Graph, h: Graph) -> bool:
    """Permutation-based isomorphism oracle."""
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    for perm in itertools.permutations(range(g.n)):
        mapped = {(min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in g.edges}
        if mapped == h.edges:
            return True
    return False


def brute_cut_norm(g: Graph, h: Graph) -> float:
    """Loop over every (S, T) subset pair with ordered-pair edge counting."""
    assert g.n == h.n

    def count(graph: Graph, s: tuple[int, ...], t: tuple[int, ...]) -> int:
        return sum(
            1 for i in s for j in t if i != j and graph.has_edge(i, j)
        )

    subsets = [
        combo
        for r in range(g.n + 1)
        for combo in itertools.combinations(range(g.n), r)
    ]
    best = Fraction(0)
    for s in subsets:
        for t in subsets:
            diff = abs(count(g, s, t) - count(h, s, t))
            best = max(best, Fraction(diff, g.n**2))
    return float(best)


# ---------------------------------------------------------------------------
# Kernel oracles
# ---------------------------------------------------------------------------

def brute_kernel_density(f: Graph, w: StepKernel) -> float:
    """Loop over all block assignments of V(f)."""
    m = w.num_blocks
    total = 0.0
    for phi in itertools.product(range(m), repeat=f.n):
        term = 1.0
        for v in phi:
            term *= w.weights[v]
        for u, v in f.edges:
            term *= w.values[phi[u], phi[v]]
        total += term
    return total


def subset_connected_oracle(w: StepKernel) -> bool:
    """Connectedness by checking every proper block subset for zero cross
    values (and the all-zero kernel separately)."""
    m = w.num_blocks
    if np.all(w.values == 0):
        return False
    for r in range(1, m):
        for subset in itertools.combinations(range(m), r):
            inside = set(subset)
            outside = [j for j in range(m) if j not in inside]
            if all(w.values[i, j] == 0 for i in inside for j in outside):
                return False
    return True


# ---------------------------------------------------------------------------
# Random objects
# ---------------------------------------------------------------------------

def random_graph(n: int, p: float, seed: int) -> Graph:
    gen = generator(seed)
    edges = [
        (i, j)
        for i, j in itertools.combinations(range(n), 2)
        if gen.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_kernel(max_blocks: int, seed: int) -> StepKernel:
    gen = generator(seed)
    m = int(gen.integers(1, max_blocks + 1))
    weights = gen.random(m) + 0.05
    weights /= weights.sum()
    values = gen.random((m, m))
    values = (values + values.T) / 2
    return make_step_kernel(weights, values)
