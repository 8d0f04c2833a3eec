"""Canonical catalogs of small connected test graphs.

Density fingerprints evaluate homomorphism densities against every
connected graph with at least one edge on at most k vertices, one
representative per isomorphism class. Canonicalization is the minimum
adjacency bit-string over all vertex permutations, which is exact and
cheap for k <= 6.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graphs import Graph

MAX_CATALOG_VERTICES = 6
DEFAULT_CATALOG_K = 4


@dataclass(frozen=True)
class TestGraphCatalog:
    """Ordered, deduplicated list of connected test graphs on <= max_vertices."""

    max_vertices: int
    graphs: tuple[Graph, ...]

    def __len__(self) -> int:
        return len(self.graphs)

    def to_json_list(self) -> list[dict]:
        return [g.to_json_dict() for g in self.graphs]


def _vertex_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def canonical_edges(g: Graph) -> tuple[tuple[int, int], ...]:
    """Canonical representative edge list: minimum over all relabelings."""
    if g.n > 8:
        raise ValueError(f"canonical_edges enumerates n! permutations; n={g.n} too large")
    best = None
    for perm in itertools.permutations(range(g.n)):
        relabeled = tuple(sorted(
            (min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in g.edges
        ))
        if best is None or relabeled < best:
            best = relabeled
    return best if best is not None else ()


def _is_connected_mask(n: int, pairs: list[tuple[int, int]], mask: int) -> bool:
    # union-find over the mask's edges; connected iff one class covers [n]
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    classes = n
    for k, (i, j) in enumerate(pairs):
        if mask >> k & 1:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
                classes -= 1
    return classes == 1


def _canonical_masks(n: int, pairs: list[tuple[int, int]], masks: list[int]) -> np.ndarray:
    """Minimum bit-string over all permutations, batched over all masks at once.

    Each permutation of the vertices induces a permutation of the edge-slot
    columns; the canonical form is the minimum of the reordered bit-strings.
    """
    p = len(pairs)
    pair_index = {pair: k for k, pair in enumerate(pairs)}
    bits = ((np.asarray(masks, dtype=np.int64)[:, None] >> np.arange(p)) & 1).astype(np.int64)
    weights = (np.int64(1) << np.arange(p, dtype=np.int64))
    canonical = None
    for perm in itertools.permutations(range(n)):
        col_map = np.fromiter(
            (pair_index[tuple(sorted((perm[i], perm[j])))] for i, j in pairs),
            dtype=np.int64, count=p,
        )
        vals = bits[:, col_map] @ weights
        canonical = vals if canonical is None else np.minimum(canonical, vals)
    return canonical


def _mask_to_graph(n: int, pairs: list[tuple[int, int]], mask: int) -> Graph:
    return Graph(n, frozenset(pairs[k] for k in range(len(pairs)) if mask >> k & 1))


@lru_cache(maxsize=None)
def enumerate_connected(k: int) -> TestGraphCatalog:
    """All connected graphs with >= 1 edge on at most k vertices, up to isomorphism.

    Ordered by vertex count, then edge count, then the lexicographic edge
    list of the canonical representative.
    """
    if not isinstance(k, int) or not 1 <= k <= MAX_CATALOG_VERTICES:
        raise ValueError(f"catalog size k must be in [1, {MAX_CATALOG_VERTICES}], got {k}")
    graphs: list[Graph] = []
    for n in range(2, k + 1):
        pairs = _vertex_pairs(n)
        connected_masks = [
            mask for mask in range(1, 1 << len(pairs))
            if _is_connected_mask(n, pairs, mask)
        ]
        if not connected_masks:
            continue
        canonical = np.unique(_canonical_masks(n, pairs, connected_masks))
        reps = [_mask_to_graph(n, pairs, int(mask)) for mask in canonical]
        reps.sort(key=lambda g: (g.edge_count, g.sorted_edges()))
        graphs.extend(reps)
    return TestGraphCatalog(max_vertices=k, graphs=tuple(graphs))
