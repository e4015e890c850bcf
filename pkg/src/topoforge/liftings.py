"""Structural liftings from graphs to higher-order domains.

Each lifting pairs a structural map (graph -> complex) with the
projected-sum feature map, so features stay consistent with the new
topology: every lifted cell's feature is the sum over its immediate
faces, iterated up the ranks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complexes import (
    AnyComplex,
    CellComplex,
    FeaturedComplex,
    Graph,
    Hypergraph,
    SimplicialComplex,
    canonical_cycle,
    populated_ranks,
    rank_cells,
)
from .operators import boundary_matrix

__all__ = [
    "LiftingConfig",
    "LiftingRefusal",
    "lift_clique",
    "lift_neighborhood",
    "lift_cycle",
    "lift_khop",
    "lift_knn",
    "lift_features_projected_sum",
    "apply_lifting",
]

STRUCTURAL_KINDS = ("clique", "neighborhood", "cycle", "khop", "knn")


class LiftingRefusal(RuntimeError):
    """A lifting declined to run (combinatorial-blowup guard)."""


@dataclass(frozen=True)
class LiftingConfig:
    """Which structural lifting to run, plus its parameters.

    The feature side is always the projected sum.
    """

    structural: str
    max_dim: int = 2
    max_neighborhood_size: int = 24
    max_cell_length: int | None = None
    k: int = 1
    feature: str = "projected_sum"

    def __post_init__(self):
        if self.structural not in STRUCTURAL_KINDS:
            raise ValueError(f"unknown structural lifting {self.structural!r}")
        if self.feature != "projected_sum":
            raise ValueError(f"unknown feature lifting {self.feature!r}")
        if self.max_dim < 1:
            raise ValueError("max_dim must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_cell_length is not None and self.max_cell_length < 3:
            raise ValueError("max_cell_length must be >= 3 when set")

    def canonical(self) -> dict:
        """Stable dict used for cache digests; drops inapplicable knobs."""
        d: dict = {"structural": self.structural, "feature": self.feature}
        if self.structural in ("clique", "neighborhood"):
            d["max_dim"] = self.max_dim
        if self.structural == "neighborhood":
            d["max_neighborhood_size"] = self.max_neighborhood_size
        if self.structural == "cycle":
            d["max_cell_length"] = self.max_cell_length
        if self.structural in ("khop", "knn"):
            d["k"] = self.k
        return d


def _neighbor_masks(g: Graph) -> list[int]:
    masks = [0] * g.num_nodes
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lift_clique(g: Graph, max_dim: int) -> SimplicialComplex:
    """Clique complex: every (r+1)-clique becomes an r-simplex, r <= max_dim.

    Ranks 0..max_dim are always present, trailing ones possibly empty.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    masks = _neighbor_masks(g)
    levels: list[tuple[tuple[int, ...], ...]] = [tuple((v,) for v in range(g.num_nodes)), g.edges]
    common = {e: masks[e[0]] & masks[e[1]] for e in g.edges}
    for r in range(2, max_dim + 1):
        nxt = []
        nxt_common = {}
        for cl in levels[r - 1]:
            cand = common[cl]
            for u in _iter_bits(cand):
                if u > cl[-1]:
                    ext = cl + (u,)
                    nxt.append(ext)
                    if r < max_dim:
                        nxt_common[ext] = cand & masks[u]
        levels.append(tuple(nxt))
        common = nxt_common
    return SimplicialComplex(max_dim, tuple(levels[: max_dim + 1]))


def lift_neighborhood(g: Graph, max_dim: int, max_neighborhood_size: int) -> SimplicialComplex:
    """Neighbor complex: each closed neighborhood becomes a simplex.

    Oversized neighborhoods (above max_dim + 1 vertices) contribute all
    their (max_dim + 1)-subsets instead; neighborhoods larger than
    ``max_neighborhood_size`` are refused outright, naming the node.
    """
    if max_neighborhood_size < max_dim + 1:
        raise ValueError("max_neighborhood_size must be >= max_dim + 1")
    nbrs = g.neighbor_sets()
    tops: set[tuple[int, ...]] = set()
    for v in range(g.num_nodes):
        s = tuple(sorted(nbrs[v] | {v}))
        if len(s) > max_neighborhood_size:
            raise LiftingRefusal(
                f"closed neighborhood of node {v} has {len(s)} vertices "
                f"(guard: {max_neighborhood_size})"
            )
        if len(s) <= max_dim + 1:
            tops.add(s)
        else:
            tops.update(combinations(s, max_dim + 1))
    by_rank: list[set[tuple[int, ...]]] = [set((v,) for v in range(g.num_nodes))]
    for top in tops:
        for k in range(2, len(top) + 1):
            for sub in combinations(top, k):
                while len(by_rank) < k:
                    by_rank.append(set())
                by_rank[k - 1].add(sub)
    max_rank = max(1, len(by_rank) - 1)
    while len(by_rank) < max_rank + 1:
        by_rank.append(set())
    return SimplicialComplex(max_rank, tuple(tuple(sorted(s)) for s in by_rank))


def _bfs_forest(g: Graph) -> tuple[list[int], list[int]]:
    """Parents and depths of a BFS forest, roots at each component's min node.

    Neighbors are expanded in ascending id order.
    """
    adj: list[list[int]] = [[] for _ in range(g.num_nodes)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    for lst in adj:
        lst.sort()
    parent = [-1] * g.num_nodes
    depth = [-1] * g.num_nodes
    for root in range(g.num_nodes):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if depth[y] < 0:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    queue.append(y)
    return parent, depth


def lift_cycle(g: Graph, max_cell_length: int | None = None) -> CellComplex:
    """Cycle lifting: 2-cells from the fundamental cycles of a BFS forest.

    Each non-tree edge (u, v) closes the tree path u -> v into one cycle.
    Cycles longer than ``max_cell_length`` (when set) are dropped; all
    kept cycles are canonicalized and deduplicated.
    """
    parent, depth = _bfs_forest(g)
    tree = {(min(u, p), max(u, p)) for u, p in enumerate(parent) if p >= 0}
    cycles: set[tuple[int, ...]] = set()
    for u, v in g.edges:
        if (u, v) in tree:
            continue
        pu, pv = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            pu.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            pv.append(b)
        while a != b:
            a, b = parent[a], parent[b]
            pu.append(a)
            pv.append(b)
        cycle = pu + pv[::-1][1:]  # u .. lca .. v, closed by (v, u)
        if max_cell_length is not None and len(cycle) > max_cell_length:
            continue
        cycles.add(canonical_cycle(cycle))
    return CellComplex(g.num_nodes, g.edges, tuple(sorted(cycles)))


def lift_khop(g: Graph, k: int) -> Hypergraph:
    """k-hop lifting: one hyperedge per node, its closed BFS k-ball."""
    if k < 1:
        raise ValueError("k must be >= 1")
    adj: list[list[int]] = [[] for _ in range(g.num_nodes)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    hyperedges: set[tuple[int, ...]] = set()
    for v in range(g.num_nodes):
        dist = {v: 0}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            if dist[x] == k:
                continue
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        hyperedges.add(tuple(sorted(dist)))
    return Hypergraph(g.num_nodes, tuple(sorted(hyperedges)))


def lift_knn(g: Graph, k: int) -> Hypergraph:
    """kNN lifting: each node groups with its k nearest feature-space peers.

    Distances are Euclidean over node features; ties break toward the
    lower node id; the node itself is always included.
    """
    if g.node_features is None:
        raise ValueError("knn lifting requires node features")
    if not (1 <= k < g.num_nodes):
        raise ValueError("need 1 <= k < num_nodes")
    x = g.node_features
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
    hyperedges: set[tuple[int, ...]] = set()
    for v in range(g.num_nodes):
        order = sorted((d2[v, u], u) for u in range(g.num_nodes) if u != v)
        members = {v} | {u for _, u in order[:k]}
        hyperedges.add(tuple(sorted(members)))
    return Hypergraph(g.num_nodes, tuple(sorted(hyperedges)))


def lift_features_projected_sum(target: AnyComplex, node_features: np.ndarray) -> dict[int, np.ndarray]:
    """Projected-sum feature lifting over a lifted complex.

    Rank-0 features are the given node features; each higher populated
    rank gets the unsigned-incidence transpose product with the rank
    below, i.e. every cell sums its immediate faces' features.
    """
    x0 = np.asarray(node_features, dtype=np.float64)
    if x0.shape[0] != len(rank_cells(target, 0)):
        raise ValueError("node feature rows must match 0-cell count")
    feats = {0: x0}
    for r in populated_ranks(target):
        if r == 0:
            continue
        incidence = boundary_matrix(target, r, signed=False)
        feats[r] = incidence.transpose().apply(feats[r - 1])
    return feats


def apply_lifting(g: Graph, cfg: LiftingConfig) -> FeaturedComplex:
    """Structural lifting then projected-sum features, labels carried over.

    Featureless graphs fall back to a single all-ones feature column so
    the feature lifting and encoders stay total.
    """
    if cfg.structural == "clique":
        lifted: AnyComplex = lift_clique(g, cfg.max_dim)
    elif cfg.structural == "neighborhood":
        lifted = lift_neighborhood(g, cfg.max_dim, cfg.max_neighborhood_size)
    elif cfg.structural == "cycle":
        lifted = lift_cycle(g, cfg.max_cell_length)
    elif cfg.structural == "khop":
        lifted = lift_khop(g, cfg.k)
    else:
        lifted = lift_knn(g, cfg.k)
    x0 = g.node_features if g.node_features is not None else np.ones((g.num_nodes, 1))
    feats = lift_features_projected_sum(lifted, x0)
    return FeaturedComplex(lifted, feats, g.node_labels, g.node_targets, g.graph_label)
