"""Finite simple graphs: components, disjoint unions, homomorphism
densities, cuts, and the exact cut-norm distance.

All operations are pure functions of their inputs. Graphs are labeled on
{0, ..., n-1}; the JSON wire form is {"n": int, "edges": [[i, j], ...]}
with the edge list sorted lexicographically on output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _sparse_components

from .errors import EnumerationBudgetError

HOM_ENUMERATION_BUDGET = 10**8
CUT_NORM_MAX_VERTICES = 24
CUT_ISO_MAX_VERTICES = 8

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class Graph:
    """Simple labeled graph: `n` vertices, edges as a frozenset of (i, j), i < j."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n}")
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"edge must be a pair, got {e}")
            i, j = e
            if i == j:
                raise ValueError(f"loop edge ({i}, {j}) not allowed")
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")

    @staticmethod
    def from_edges(n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph, normalizing each pair to (min, max) and deduplicating."""
        normalized = set()
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"loop edge ({i}, {j}) not allowed")
            normalized.add((min(i, j), max(i, j)))
        return Graph(n=n, edges=frozenset(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as a read-only (e, 2) int64 array in lexicographic order."""
        if not self.edges:
            arr = np.empty((0, 2), dtype=np.int64)
        else:
            arr = np.array(self.sorted_edges(), dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix (float64, read-only)."""
        a = np.zeros((self.n, self.n), dtype=np.float64)
        if self.edges:
            e = self.edge_array
            a[e[:, 0], e[:, 1]] = 1.0
            a[e[:, 1], e[:, 0]] = 1.0
        a.setflags(write=False)
        return a

    def degrees(self) -> np.ndarray:
        e = self.edge_array
        return np.bincount(e.ravel(), minlength=self.n).astype(np.int64)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @staticmethod
    def from_json_dict(data: dict) -> "Graph":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise ValueError('graph JSON must have the form {"n": ..., "edges": [...]}')
        return Graph.from_edges(int(data["n"]), data["edges"])


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


# ---------------------------------------------------------------------------
# Components and disjoint unions
# ---------------------------------------------------------------------------

def components(g: Graph) -> list[set[int]]:
    """Connected components as vertex sets, ordered by smallest contained vertex."""
    if not g.edges:
        return [{v} for v in range(g.n)]
    e = g.edge_array
    ones = np.ones(len(e), dtype=np.int8)
    adj = coo_matrix((ones, (e[:, 0], e[:, 1])), shape=(g.n, g.n))
    _, labels = _sparse_components(adj, directed=False)
    comps: dict[int, set[int]] = {}
    for v, lab in enumerate(labels):
        comps.setdefault(int(lab), set()).add(v)
    return sorted(comps.values(), key=min)


def is_connected_graph(g: Graph) -> bool:
    return len(components(g)) == 1


def direct_sum_graphs(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union: g2's vertices are relabeled by +n1; no cross edges."""
    shifted = [(i + g1.n, j + g1.n) for i, j in g2.edges]
    return Graph(g1.n + g2.n, frozenset(g1.edges) | frozenset(shifted))


# ---------------------------------------------------------------------------
# Homomorphism densities
# ---------------------------------------------------------------------------

def hom_count(f: Graph, g: Graph) -> int:
    """Number of maps V(f) -> V(g) preserving every edge of f.

    Evaluated as the exhaustive sum over all g.n**f.n assignments of the
    product of adjacency entries, contracted with einsum; all intermediate
    values are integer counts below 2**53, so the result is exact.
    """
    if f.edge_count == 0:
        return g.n**f.n
    subs = ",".join(_LETTERS[u] + _LETTERS[v] for u, v in f.sorted_edges())
    count = np.einsum(subs + "->", *([g.adjacency] * f.edge_count), optimize=True)
    touched = {u for e in f.edges for u in e}
    return int(round(float(count))) * g.n ** (f.n - len(touched))


def hom_density_graph(f: Graph, g: Graph) -> float:
    """Probability that a uniformly random map V(f) -> V(g) is a homomorphism."""
    total = g.n**f.n
    if total > HOM_ENUMERATION_BUDGET:
        raise EnumerationBudgetError(
            f"hom_density_graph needs {g.n}**{f.n} = {total} map evaluations, "
            f"over the budget of {HOM_ENUMERATION_BUDGET}"
        )
    return hom_count(f, g) / total


# ---------------------------------------------------------------------------
# Cuts
# ---------------------------------------------------------------------------

def check_partition(g: Graph, side: Sequence[int]) -> np.ndarray:
    """Validate a 2-partition indicator vector (0 or 1 per vertex)."""
    arr = np.asarray(side, dtype=np.int64)
    if arr.shape != (g.n,):
        raise ValueError(f"partition length {arr.shape} does not match n={g.n}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("partition entries must be 0 or 1")
    return arr


def cut_size(g: Graph, side: Sequence[int]) -> int:
    """Number of edges with one endpoint on each side of the partition."""
    arr = check_partition(g, side)
    if not g.edges:
        return 0
    e = g.edge_array
    return int(np.count_nonzero(arr[e[:, 0]] != arr[e[:, 1]]))


def _max_cut_discrepancy(diff: np.ndarray) -> float:
    """max over S, T of |sum_{i in S, j in T} diff[i, j]| for a symmetric diff.

    Uses the ordered-pair convention: e(S, T) counts pairs (i, j) with
    i in S, j in T, so an edge inside S & T contributes twice. For each S
    the optimum over T splits per column sign, which makes the exact
    2**n enumeration over S feasible.
    """
    n = diff.shape[0]
    d32 = diff.astype(np.float32)  # entries in {-1,0,1}; column sums stay exact
    best = 0.0
    total = 1 << n
    batch = 1 << 16
    cols = np.arange(n, dtype=np.int64)
    for start in range(0, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        subset_bits = ((idx[:, None] >> cols) & 1).astype(np.float32)
        col_sums = subset_bits @ d32
        pos = np.where(col_sums > 0, col_sums, 0).sum(axis=1)
        neg = np.where(col_sums < 0, col_sums, 0).sum(axis=1)
        best = max(best, float(pos.max()), float(-neg.min()))
    return best


def cut_norm_distance(g: Graph, h: Graph) -> float:
    """Exact normalized cut-norm distance between two graphs on the same labels.

    e(S, T) counts ordered pairs (i, j), i in S, j in T, {i, j} an edge;
    edges inside S & T count once per orientation.
    """
    if g.n != h.n:
        raise ValueError(f"graphs must share a vertex set, got n={g.n} and n={h.n}")
    if g.n > CUT_NORM_MAX_VERTICES:
        raise EnumerationBudgetError(
            f"cut_norm_distance enumerates 2**n subsets; n={g.n} exceeds "
            f"the exact bound {CUT_NORM_MAX_VERTICES}"
        )
    diff = g.adjacency - h.adjacency
    return _max_cut_discrepancy(diff) / g.n**2


def cut_distance_iso(g: Graph, h: Graph) -> float:
    """Cut-norm distance minimized over all vertex relabelings of h."""
    if g.n != h.n:
        raise ValueError(f"graphs must share a vertex set, got n={g.n} and n={h.n}")
    if g.n > CUT_ISO_MAX_VERTICES:
        raise EnumerationBudgetError(
            f"cut_distance_iso enumerates n! relabelings; n={g.n} exceeds "
            f"the exact bound {CUT_ISO_MAX_VERTICES}"
        )
    ag = g.adjacency
    ah = h.adjacency
    best = np.inf
    for perm in itertools.permutations(range(g.n)):
        p = np.array(perm)
        diff = ag - ah[np.ix_(p, p)]
        best = min(best, _max_cut_discrepancy(diff))
        if best == 0.0:
            break
    return best / g.n**2
