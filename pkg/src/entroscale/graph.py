"""Scale-indexed neighborhood graphs and a union-find components oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DistanceMatrix


class DuplicatePoints(ValueError):
    """Raised when a distance matrix has coincident points (zero off-diagonal
    entries), which would violate edge-weight positivity."""

    def __init__(self, pairs):
        self.pairs = [(int(i), int(j)) for i, j in pairs]
        shown = ", ".join(f"({i},{j})" for i, j in self.pairs[:10])
        more = "" if len(self.pairs) <= 10 else f" and {len(self.pairs) - 10} more"
        super().__init__(
            f"duplicate points at index pairs {shown}{more}; deduplicate before building graphs")


@dataclass
class WeightedGraph:
    """Graph on n vertices with edges (i, j, w), i < j, 0 < w <= scale.

    Edges connect every pair of points within ambient distance ``scale`` of
    one another; the weight is that distance.
    """

    n: int
    pairs: np.ndarray    # (m, 2) int, i < j, sorted lexicographically
    weights: np.ndarray  # (m,) float
    scale: float

    @property
    def edge_count(self) -> int:
        return self.pairs.shape[0]

    def edges(self):
        """Iterate edges as (i, j, w) tuples."""
        for (i, j), w in zip(self.pairs, self.weights):
            yield int(i), int(j), float(w)


@dataclass
class ComponentLabeling:
    """Connected-component ids in 0..k-1, numbered by first vertex occurrence."""

    labels: np.ndarray
    k: int


def find_duplicate_pairs(d: DistanceMatrix):
    """Index pairs (i < j) at ambient distance exactly zero."""
    iu, ju = np.triu_indices(d.n, k=1)
    z = d.d[iu, ju] == 0.0
    return list(zip(iu[z].tolist(), ju[z].tolist()))


def build_graph(d: DistanceMatrix, r: float) -> WeightedGraph:
    """Graph with an edge for every pair at distance in (0, r].

    Coincident points are an error (DuplicatePoints): a zero weight would not
    be a valid edge weight, and silently merging duplicates would corrupt
    cluster counts downstream.
    """
    if r <= 0:
        raise ValueError("scale r must be positive")
    dup = find_duplicate_pairs(d)
    if dup:
        raise DuplicatePoints(dup)
    iu, ju = np.triu_indices(d.n, k=1)
    w = d.d[iu, ju]
    sel = w <= r
    return WeightedGraph(n=d.n,
                         pairs=np.column_stack([iu[sel], ju[sel]]),
                         weights=w[sel].copy(),
                         scale=float(r))


class UnionFind:
    """Disjoint-set forest with path halving and union by size."""

    def __init__(self, n):
        self.parent = np.arange(n)
        self.size = np.ones(n, dtype=int)
        self.count = n

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1


def _labels_from_unionfind(uf):
    n = len(uf.parent)
    labels = np.empty(n, dtype=int)
    ids = {}
    for v in range(n):
        root = uf.find(v)
        if root not in ids:
            ids[root] = len(ids)
        labels[v] = ids[root]
    return labels, len(ids)


def connected_components(g: WeightedGraph) -> ComponentLabeling:
    """Union-find labeling of the graph's connected components."""
    uf = UnionFind(g.n)
    for i, j in g.pairs:
        uf.union(int(i), int(j))
    labels, k = _labels_from_unionfind(uf)
    return ComponentLabeling(labels=labels, k=k)


def component_profile(d: DistanceMatrix, grid) -> list[tuple[float, int]]:
    """Component count at each scale of an ascending positive grid.

    Edges only accumulate as r grows, so a single union-find is swept
    incrementally across the grid.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ValueError("grid must be non-empty with positive scales")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted ascending")
    dup = find_duplicate_pairs(d)
    if dup:
        raise DuplicatePoints(dup)

    iu, ju = np.triu_indices(d.n, k=1)
    w = d.d[iu, ju]
    order = np.argsort(w, kind="stable")
    iu, ju, w = iu[order], ju[order], w[order]

    uf = UnionFind(d.n)
    out = []
    pos = 0
    for r in grid:
        while pos < w.size and w[pos] <= r:
            uf.union(int(iu[pos]), int(ju[pos]))
            pos += 1
        out.append((float(r), uf.count))
    return out


# ---------------------------------------------------------------------------
# serialization

def graph_to_edgelist(g: WeightedGraph, path) -> None:
    """Text edge list: header line "n r", then one "i j w" line per edge."""
    with open(path, "w") as f:
        f.write(f"{g.n} {g.scale!r}\n")
        for i, j, w in g.edges():
            f.write(f"{i} {j} {w!r}\n")


def graph_from_edgelist(path) -> WeightedGraph:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    n_str, r_str = lines[0].split()
    pairs, weights = [], []
    for ln in lines[1:]:
        i, j, w = ln.split()
        pairs.append((int(i), int(j)))
        weights.append(float(w))
    pairs = np.array(pairs, dtype=int).reshape(-1, 2)
    return WeightedGraph(n=int(n_str), pairs=pairs,
                         weights=np.array(weights, dtype=float),
                         scale=float(r_str))
