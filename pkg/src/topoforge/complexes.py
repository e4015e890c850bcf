"""Topological domains: graphs, complexes, and their validated containers.

All values are immutable after construction (frozen dataclasses; numpy
arrays are flagged read-only), so they are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

__all__ = [
    "Graph",
    "SimplicialComplex",
    "CellComplex",
    "Hypergraph",
    "CombinatorialComplex",
    "FeaturedComplex",
    "AnyComplex",
    "Violation",
    "EdgeCanonicalization",
    "build_graph",
    "canonicalize_edges",
    "canonical_cycle",
    "validate_complex",
    "cell_counts",
    "populated_ranks",
    "rank_cells",
    "cell_faces",
    "kind_of",
    "disjoint_union",
    "as_featured",
]

Cell = tuple[int, ...]
Edge = tuple[int, int]


def _freeze(arr: np.ndarray | None) -> np.ndarray | None:
    if arr is None:
        return None
    arr = np.asarray(arr)
    arr.setflags(write=False)
    return arr


def _as_float_matrix(values, name: str) -> np.ndarray:
    m = np.asarray(values, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite values")
    return m


def _arrays_equal(a: np.ndarray | None, b: np.ndarray | None) -> bool:
    if a is None or b is None:
        return a is b
    return a.shape == b.shape and np.array_equal(a, b)


@dataclass(frozen=True, eq=False)
class Graph:
    """Canonical node/edge container.

    Edges are (u, v) with u < v, strictly increasing lexicographically,
    no duplicates, no self-loops. Use :func:`build_graph` to construct
    from raw input.
    """

    num_nodes: int
    edges: tuple[Edge, ...]
    node_features: np.ndarray | None = None
    node_labels: np.ndarray | None = None
    node_targets: np.ndarray | None = None
    graph_label: int | float | None = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.num_nodes == other.num_nodes
            and self.edges == other.edges
            and _arrays_equal(self.node_features, other.node_features)
            and _arrays_equal(self.node_labels, other.node_labels)
            and _arrays_equal(self.node_targets, other.node_targets)
            and self.graph_label == other.graph_label
        )

    def neighbor_sets(self) -> list[set[int]]:
        nbrs: list[set[int]] = [set() for _ in range(self.num_nodes)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of simplices, stored per rank.

    ``cells[r]`` holds the rank-r simplices (vertex tuples, strictly
    increasing) in lexicographic order, for r = 0..max_rank. Trailing
    ranks may be empty.
    """

    max_rank: int
    cells: tuple[tuple[Cell, ...], ...]

    @property
    def num_nodes(self) -> int:
        return len(self.cells[0])


@dataclass(frozen=True)
class CellComplex:
    """Regular cell complex of dimension <= 2 built from cycles.

    Each 2-cell is a canonical cycle: rotated so the minimal vertex
    comes first, oriented so the second vertex is smaller than the last.
    """

    num_nodes: int
    edges: tuple[Edge, ...]
    two_cells: tuple[Cell, ...]


@dataclass(frozen=True)
class Hypergraph:
    """Nodes plus a duplicate-free, lexicographically sorted hyperedge list."""

    num_nodes: int
    hyperedges: tuple[Cell, ...]


@dataclass(frozen=True)
class CombinatorialComplex:
    """Node subsets equipped with an order-preserving rank function.

    ``cells`` and ``ranks`` are aligned; cells are sorted by (rank, cell).
    """

    num_nodes: int
    cells: tuple[Cell, ...]
    ranks: tuple[int, ...]

    def rank_of(self) -> dict[Cell, int]:
        return dict(zip(self.cells, self.ranks))


AnyComplex = Union[Graph, SimplicialComplex, CellComplex, Hypergraph, CombinatorialComplex]


@dataclass(frozen=True, eq=False)
class FeaturedComplex:
    """A complex paired with one feature matrix per populated rank.

    ``features[r]`` is the rank-r cochain: one row per rank-r cell, 64-bit
    reals. Node labels/targets and the graph label ride along so lifted
    datasets stay self-contained.
    """

    complex: AnyComplex
    features: Mapping[int, np.ndarray]
    node_labels: np.ndarray | None = None
    node_targets: np.ndarray | None = None
    graph_label: int | float | None = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FeaturedComplex)
            and self.complex == other.complex
            and sorted(self.features) == sorted(other.features)
            and all(_arrays_equal(self.features[r], other.features[r]) for r in self.features)
            and _arrays_equal(self.node_labels, other.node_labels)
            and _arrays_equal(self.node_targets, other.node_targets)
            and self.graph_label == other.graph_label
        )

    def __post_init__(self):
        feats = {int(r): _freeze(_as_float_matrix(m, f"features[{r}]")) for r, m in self.features.items()}
        object.__setattr__(self, "features", feats)
        for r, m in feats.items():
            n = len(rank_cells(self.complex, r))
            if m.shape[0] != n:
                raise ValueError(f"features[{r}] has {m.shape[0]} rows for {n} rank-{r} cells")


class EdgeCanonicalization(NamedTuple):
    edges: tuple[Edge, ...]
    dropped_duplicates: int
    dropped_self_loops: int


def canonicalize_edges(num_nodes: int, raw_edges: Iterable[Sequence[int]]) -> EdgeCanonicalization:
    """Sort, orient, and dedupe an edge list; report what was dropped."""
    seen: set[Edge] = set()
    loops = 0
    dupes = 0
    for e in raw_edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{num_nodes - 1}")
        if u == v:
            loops += 1
            continue
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            dupes += 1
            continue
        seen.add((u, v))
    return EdgeCanonicalization(tuple(sorted(seen)), dupes, loops)


def build_graph(
    num_nodes: int,
    raw_edges: Iterable[Sequence[int]],
    features=None,
    labels=None,
    targets=None,
    graph_label=None,
) -> Graph:
    """Build a canonical :class:`Graph` from raw edges.

    Self-loops and duplicates are dropped silently; use
    :func:`canonicalize_edges` when the dropped counts matter.
    """
    if num_nodes < 0:
        raise ValueError("num_nodes must be non-negative")
    edges = canonicalize_edges(num_nodes, raw_edges).edges
    feat = None
    if features is not None:
        feat = _as_float_matrix(features, "node_features")
        if feat.shape[0] != num_nodes:
            raise ValueError(f"node_features has {feat.shape[0]} rows for {num_nodes} nodes")
    lab = None if labels is None else np.asarray(labels, dtype=np.int64)
    if lab is not None and lab.shape != (num_nodes,):
        raise ValueError(f"node_labels must have shape ({num_nodes},), got {lab.shape}")
    tgt = None if targets is None else np.asarray(targets, dtype=np.float64)
    if tgt is not None and tgt.shape != (num_nodes,):
        raise ValueError(f"node_targets must have shape ({num_nodes},), got {tgt.shape}")
    return Graph(num_nodes, edges, _freeze(feat), _freeze(lab), _freeze(tgt), graph_label)


def canonical_cycle(vertices: Sequence[int]) -> Cell:
    """Rotate/orient a vertex cycle into its unique canonical form.

    The minimal vertex comes first; direction is fixed so the second
    vertex is smaller than the last.
    """
    vs = [int(v) for v in vertices]
    if len(vs) < 3:
        raise ValueError(f"a 2-cell needs at least 3 vertices, got {vs}")
    if len(set(vs)) != len(vs):
        raise ValueError(f"cycle revisits a vertex: {vs}")
    i = vs.index(min(vs))
    rot = vs[i:] + vs[:i]
    if rot[1] > rot[-1]:
        rot = [rot[0]] + rot[1:][::-1]
    return tuple(rot)


# ---------------------------------------------------------------------------
# Uniform rank access


def kind_of(c: AnyComplex | FeaturedComplex) -> str:
    if isinstance(c, FeaturedComplex):
        c = c.complex
    return {
        Graph: "graph",
        SimplicialComplex: "simplicial",
        CellComplex: "cell",
        Hypergraph: "hypergraph",
        CombinatorialComplex: "combinatorial",
    }[type(c)]


def populated_ranks(c: AnyComplex) -> tuple[int, ...]:
    """Ranks holding at least one cell. Hypergraph hyperedges count as rank 1."""
    return tuple(r for r in range(_max_rank(c) + 1) if rank_cells(c, r))


def _max_rank(c: AnyComplex) -> int:
    if isinstance(c, Graph):
        return 1
    if isinstance(c, SimplicialComplex):
        return c.max_rank
    if isinstance(c, CellComplex):
        return 2
    if isinstance(c, Hypergraph):
        return 1
    if isinstance(c, CombinatorialComplex):
        return max(c.ranks, default=0)
    raise TypeError(f"not a complex: {type(c).__name__}")


def rank_cells(c: AnyComplex, r: int) -> tuple[Cell, ...]:
    """The rank-r cells of ``c`` in canonical order.

    For cell complexes the rank-2 entries are cycles (traversal order);
    everywhere else cells are strictly increasing vertex tuples.
    """
    if r < 0 or r > _max_rank(c):
        return ()
    if isinstance(c, Graph):
        return tuple((v,) for v in range(c.num_nodes)) if r == 0 else c.edges
    if isinstance(c, SimplicialComplex):
        return c.cells[r]
    if isinstance(c, CellComplex):
        if r == 0:
            return tuple((v,) for v in range(c.num_nodes))
        return c.edges if r == 1 else c.two_cells
    if isinstance(c, Hypergraph):
        return tuple((v,) for v in range(c.num_nodes)) if r == 0 else c.hyperedges
    if isinstance(c, CombinatorialComplex):
        return tuple(x for x, rk in zip(c.cells, c.ranks) if rk == r)
    raise TypeError(f"not a complex: {type(c).__name__}")


def cell_faces(c: AnyComplex, r: int, cell: Cell) -> list[Cell]:
    """Immediate rank-(r-1) faces of a rank-r cell, in canonical cell form."""
    if r == 0:
        return []
    if isinstance(c, SimplicialComplex):
        return [cell[:i] + cell[i + 1 :] for i in range(len(cell))]
    if isinstance(c, (Graph, Hypergraph)) or (isinstance(c, CellComplex) and r == 1):
        return [(v,) for v in cell]
    if isinstance(c, CellComplex):  # r == 2: the boundary edges of the cycle
        m = len(cell)
        return [tuple(sorted((cell[i], cell[(i + 1) % m]))) for i in range(m)]
    if isinstance(c, CombinatorialComplex):
        s = set(cell)
        return [y for y, rk in zip(c.cells, c.ranks) if rk == r - 1 and set(y) <= s]
    raise TypeError(f"not a complex: {type(c).__name__}")


def cell_counts(c: AnyComplex | FeaturedComplex) -> tuple[tuple[object, int], ...]:
    """Per-rank cell counts; hypergraphs report ('hyperedges', count)."""
    if isinstance(c, FeaturedComplex):
        c = c.complex
    if isinstance(c, Hypergraph):
        return ((0, c.num_nodes), ("hyperedges", len(c.hyperedges)))
    return tuple((r, len(rank_cells(c, r))) for r in range(_max_rank(c) + 1))


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    """First violated invariant: which one, at which cell."""

    invariant: str
    cell: object
    detail: str

    def __str__(self) -> str:
        return f"{self.invariant} at {self.cell}: {self.detail}"


def _check_sorted_cells(cells: Sequence[Cell], num_nodes: int, what: str) -> Violation | None:
    prev = None
    for cell in cells:
        if len(cell) == 0:
            return Violation("non-empty", cell, f"empty {what}")
        if any(not (0 <= v < num_nodes) for v in cell):
            return Violation("vertex-range", cell, f"{what} vertex outside 0..{num_nodes - 1}")
        if any(cell[i] >= cell[i + 1] for i in range(len(cell) - 1)):
            return Violation("sortedness", cell, f"{what} vertices not strictly increasing")
        if prev is not None and cell <= prev:
            return Violation("ordering", cell, f"{what} list not sorted/duplicate-free")
        prev = cell
    return None


def validate_complex(c: AnyComplex | FeaturedComplex) -> Violation | None:
    """Check every type invariant; return None when all hold.

    The report names the first violated invariant and the offending cell.
    """
    if isinstance(c, FeaturedComplex):
        bad = validate_complex(c.complex)
        if bad is not None:
            return bad
        for r, m in sorted(c.features.items()):
            n = len(rank_cells(c.complex, r))
            if n == 0:
                return Violation("feature-rank", r, "features attached to an unpopulated rank")
            if m.shape[0] != n:
                return Violation("feature-rows", r, f"{m.shape[0]} rows for {n} cells")
        return None

    if isinstance(c, Graph):
        return _validate_graph(c)
    if isinstance(c, SimplicialComplex):
        return _validate_simplicial(c)
    if isinstance(c, CellComplex):
        return _validate_cellular(c)
    if isinstance(c, Hypergraph):
        return _check_sorted_cells(c.hyperedges, c.num_nodes, "hyperedge")
    if isinstance(c, CombinatorialComplex):
        return _validate_combinatorial(c)
    return Violation("kind", type(c).__name__, "not a recognized complex type")


def _validate_graph(g: Graph) -> Violation | None:
    prev = None
    for u, v in g.edges:
        if not (0 <= u < g.num_nodes and 0 <= v < g.num_nodes):
            return Violation("vertex-range", (u, v), "endpoint out of range")
        if u == v:
            return Violation("self-loop", (u, v), "self-loops are not allowed")
        if u > v:
            return Violation("orientation", (u, v), "edges must satisfy u < v")
        if prev is not None and (u, v) <= prev:
            return Violation("ordering", (u, v), "edge list not sorted/duplicate-free")
        prev = (u, v)
    if g.node_features is not None and g.node_features.shape[0] != g.num_nodes:
        return Violation("feature-rows", None, f"{g.node_features.shape[0]} rows for {g.num_nodes} nodes")
    return None


def _validate_simplicial(sc: SimplicialComplex) -> Violation | None:
    if sc.max_rank < 0 or len(sc.cells) != sc.max_rank + 1:
        return Violation("rank-shape", None, f"cells has {len(sc.cells)} ranks for max_rank {sc.max_rank}")
    n = len(sc.cells[0])
    if sc.cells[0] != tuple((v,) for v in range(n)):
        return Violation("zero-cells", None, "rank 0 must list every node exactly once, in order")
    present = [set(cells) for cells in sc.cells]
    for r in range(sc.max_rank + 1):
        bad = _check_sorted_cells(sc.cells[r], n, f"rank-{r} simplex")
        if bad is not None:
            return bad
        for cell in sc.cells[r]:
            if len(cell) != r + 1:
                return Violation("rank", cell, f"simplex of {len(cell)} vertices stored at rank {r}")
            if r > 0:
                for face in (cell[:i] + cell[i + 1 :] for i in range(len(cell))):
                    if face not in present[r - 1]:
                        return Violation("closure", cell, f"face {face} missing")
    return None


def _validate_cellular(cc: CellComplex) -> Violation | None:
    bad = _validate_graph(Graph(cc.num_nodes, cc.edges))
    if bad is not None:
        return bad
    edge_set = set(cc.edges)
    prev = None
    for cyc in cc.two_cells:
        if len(cyc) < 3:
            return Violation("cycle-length", cyc, "2-cells need at least 3 vertices")
        if len(set(cyc)) != len(cyc):
            return Violation("cycle-simple", cyc, "cycle revisits a vertex")
        if cyc != canonical_cycle(cyc):
            return Violation("canonical-form", cyc, f"expected {canonical_cycle(cyc)}")
        for i in range(len(cyc)):
            e = tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)])))
            if e not in edge_set:
                return Violation("skeleton", cyc, f"boundary edge {e} missing from 1-skeleton")
        if prev is not None and cyc <= prev:
            return Violation("ordering", cyc, "2-cell list not sorted/duplicate-free")
        prev = cyc
    return None


def _validate_combinatorial(ccc: CombinatorialComplex) -> Violation | None:
    if len(ccc.cells) != len(ccc.ranks):
        return Violation("rank-shape", None, "cells and ranks differ in length")
    singletons = {x: rk for x, rk in zip(ccc.cells, ccc.ranks) if len(x) == 1}
    for v in range(ccc.num_nodes):
        if (v,) not in singletons:
            return Violation("singletons", (v,), "every node must appear as a rank-0 cell")
        if singletons[(v,)] != 0:
            return Violation("singleton-rank", (v,), f"rank {singletons[(v,)]} != 0")
    bad = _check_sorted_cells(sorted(ccc.cells), ccc.num_nodes, "cell")
    if bad is not None:
        return bad
    if len(set(ccc.cells)) != len(ccc.cells):
        return Violation("duplicates", None, "duplicate cells")
    if any(rk < 0 for rk in ccc.ranks):
        return Violation("rank-range", None, "ranks must be non-negative")
    by_size = sorted(zip(ccc.cells, ccc.ranks), key=lambda t: len(t[0]))
    for i, (x, rx) in enumerate(by_size):
        sx = set(x)
        for y, ry in by_size[i + 1 :]:
            if rx > ry and sx <= set(y):
                return Violation("order-preserving", x, f"{x} (rank {rx}) is inside {y} (rank {ry})")
    return None


# ---------------------------------------------------------------------------
# Batching


def _offset_cell(cell: Cell, off: int) -> Cell:
    return tuple(v + off for v in cell)


def disjoint_union(
    samples: Sequence[FeaturedComplex],
) -> tuple[FeaturedComplex, dict[int, np.ndarray]]:
    """Stack featured complexes into one, with per-rank batch vectors.

    Node ids are offset per sample, features are stacked vertically, and
    ``batch[r][i]`` is the sample index of the i-th rank-r cell. Every
    operator of the union is block-diagonal in the per-sample operators.
    """
    if not samples:
        raise ValueError("disjoint_union of zero samples")
    kinds = {kind_of(fc) for fc in samples}
    if len(kinds) != 1:
        raise ValueError(f"mixed domain kinds: {sorted(kinds)}")
    kind = kinds.pop()
    for r in sorted({r for fc in samples for r in fc.features}):
        widths = {fc.features[r].shape[1] for fc in samples if r in fc.features}
        if len(widths) > 1:
            raise ValueError(f"rank-{r} feature widths differ: {sorted(widths)}")

    union = _union_complex(kind, [fc.complex for fc in samples])
    features: dict[int, np.ndarray] = {}
    batch: dict[int, np.ndarray] = {}
    for r in populated_ranks(union):
        seg = np.concatenate(
            [np.full(len(rank_cells(fc.complex, r)), i, dtype=np.int64) for i, fc in enumerate(samples)]
        )
        batch[r] = _freeze(seg)
        mats = [fc.features[r] for fc in samples if r in fc.features]
        if mats:
            d = mats[0].shape[1]
            rows = [
                fc.features[r] if r in fc.features else np.zeros((len(rank_cells(fc.complex, r)), d))
                for fc in samples
            ]
            features[r] = np.vstack(rows)

    labels = None
    if all(fc.node_labels is not None for fc in samples):
        labels = np.concatenate([fc.node_labels for fc in samples])
    targets = None
    if all(fc.node_targets is not None for fc in samples):
        targets = np.concatenate([fc.node_targets for fc in samples])
    fused = FeaturedComplex(union, features, _freeze(labels), _freeze(targets), None)
    return fused, batch


def _union_complex(kind: str, cs: Sequence[AnyComplex]) -> AnyComplex:
    offs = np.cumsum([0] + [_num_nodes(c) for c in cs])
    total = int(offs[-1])
    if kind == "graph":
        edges = tuple(_offset_cell(e, offs[i]) for i, c in enumerate(cs) for e in c.edges)
        return Graph(total, edges)
    if kind == "simplicial":
        max_rank = max(c.max_rank for c in cs)
        cells = tuple(
            tuple(_offset_cell(x, offs[i]) for i, c in enumerate(cs) for x in rank_cells(c, r))
            for r in range(max_rank + 1)
        )
        return SimplicialComplex(max_rank, cells)
    if kind == "cell":
        edges = tuple(_offset_cell(e, offs[i]) for i, c in enumerate(cs) for e in c.edges)
        two = tuple(_offset_cell(x, offs[i]) for i, c in enumerate(cs) for x in c.two_cells)
        return CellComplex(total, edges, two)
    if kind == "hypergraph":
        hes = tuple(_offset_cell(h, offs[i]) for i, c in enumerate(cs) for h in c.hyperedges)
        return Hypergraph(total, hes)
    if kind == "combinatorial":
        cells = tuple(_offset_cell(x, offs[i]) for i, c in enumerate(cs) for x in c.cells)
        ranks = tuple(rk for c in cs for rk in c.ranks)
        return CombinatorialComplex(total, cells, ranks)
    raise ValueError(f"unknown kind {kind!r}")


def _num_nodes(c: AnyComplex) -> int:
    return len(rank_cells(c, 0))


def as_featured(g: Graph, default_width: int = 1) -> FeaturedComplex:
    """Wrap a graph as a featured complex; featureless graphs get all-ones."""
    x0 = g.node_features
    if x0 is None:
        x0 = np.ones((g.num_nodes, default_width))
    feats = {0: np.asarray(x0, dtype=np.float64)}
    if g.edges:
        ends = np.array(g.edges)
        feats[1] = feats[0][ends[:, 0]] + feats[0][ends[:, 1]]
    return FeaturedComplex(g, feats, g.node_labels, g.node_targets, g.graph_label)
