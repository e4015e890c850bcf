"""Incidence and adjacency operators: rank-to-rank sparse linear maps.

Entries are stored as sorted COO triples with 64-bit real values. All
values here are small integers, so arithmetic stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import (
    AnyComplex,
    CellComplex,
    CombinatorialComplex,
    FeaturedComplex,
    Graph,
    Hypergraph,
    SimplicialComplex,
    cell_faces,
    kind_of,
    populated_ranks,
    rank_cells,
)

__all__ = [
    "SparseOperator",
    "NeighborhoodSpec",
    "OperatorError",
    "boundary_matrix",
    "adjacency_matrix",
    "resolve_neighborhood",
    "identity_operator",
]

NEIGHBORHOOD_KINDS = ("up_incidence", "down_incidence", "up_adjacency", "down_adjacency", "identity")


class OperatorError(ValueError):
    """Requested operator cannot be built on the given complex."""


@dataclass(frozen=True)
class SparseOperator:
    """Sparse rank-to-rank linear map in sorted COO form.

    Maps rank ``source_rank`` cochains (columns) to rank ``target_rank``
    cochains (rows): ``apply(X)`` with X of shape (cols, d) yields
    (rows, d).
    """

    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    source_rank: int
    target_rank: int
    signed: bool

    def __post_init__(self):
        for name in ("rows", "cols", "values"):
            a = np.asarray(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @classmethod
    def from_entries(cls, shape, entries, *, source_rank, target_rank, signed) -> "SparseOperator":
        """Build from (row, col, value) triples; sorts row-major, rejects dupes."""
        entries = sorted(entries)
        rows = np.array([e[0] for e in entries], dtype=np.int64)
        cols = np.array([e[1] for e in entries], dtype=np.int64)
        values = np.array([e[2] for e in entries], dtype=np.float64)
        if rows.size:
            if rows.min() < 0 or rows.max() >= shape[0] or cols.min() < 0 or cols.max() >= shape[1]:
                raise OperatorError(f"entry outside shape {shape}")
            keys = rows * shape[1] + cols
            if np.unique(keys).size != keys.size:
                raise OperatorError("duplicate (row, col) entry")
        return cls(tuple(shape), rows, cols, values, source_rank, target_rank, signed)

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Sparse-dense product; x has one row per source-rank cell."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.shape[1]:
            raise OperatorError(f"operand rows {x.shape[0]} != operator cols {self.shape[1]}")
        out = np.zeros((self.shape[0],) + x.shape[1:], dtype=np.float64)
        if self.nnz:
            np.add.at(out, self.rows, (self.values.reshape(-1, *([1] * (x.ndim - 1)))) * x[self.cols])
        return out

    def transpose(self) -> "SparseOperator":
        order = np.lexsort((self.rows, self.cols))
        return SparseOperator(
            (self.shape[1], self.shape[0]),
            self.cols[order].copy(),
            self.rows[order].copy(),
            self.values[order].copy(),
            source_rank=self.target_rank,
            target_rank=self.source_rank,
            signed=self.signed,
        )

    def unsigned(self) -> "SparseOperator":
        if not self.signed:
            return self
        return SparseOperator(
            self.shape, self.rows, self.cols, np.abs(self.values),
            source_rank=self.source_rank, target_rank=self.target_rank, signed=False,
        )

    def row_normalized(self) -> "SparseOperator":
        """Divide each row by its structural neighbor count; empty rows stay zero."""
        counts = np.zeros(self.shape[0], dtype=np.float64)
        np.add.at(counts, self.rows, 1.0)
        vals = self.values / counts[self.rows] if self.nnz else self.values
        return SparseOperator(
            self.shape, self.rows, self.cols, vals,
            source_rank=self.source_rank, target_rank=self.target_rank, signed=self.signed,
        )

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape, dtype=np.float64)
        dense[self.rows, self.cols] = self.values
        return dense


def identity_operator(n: int, rank: int) -> SparseOperator:
    idx = np.arange(n, dtype=np.int64)
    return SparseOperator((n, n), idx, idx, np.ones(n), source_rank=rank, target_rank=rank, signed=False)


def _require_rank(c: AnyComplex, r: int, why: str):
    if not rank_cells(c, r):
        raise OperatorError(f"{why} requires populated rank {r} on this {kind_of(c)} complex")


def boundary_matrix(c: AnyComplex | FeaturedComplex, r: int, signed: bool) -> SparseOperator:
    """The incidence operator from rank r down to rank r-1.

    Signed entries (simplicial/cell complexes only):

    * simplicial: deleting the i-th vertex of a sorted simplex gives its
      i-th face with sign (-1)^i;
    * cell complex, rank 2: edge (u, v) with u < v contributes +1 when
      the canonical cycle traverses u -> v and -1 for v -> u;
    * cell complex, rank 1: -1 at the smaller endpoint, +1 at the larger.

    Unsigned mode takes elementwise absolute values. Hypergraphs expose
    only the unsigned node x hyperedge incidence at r = 1.
    """
    if isinstance(c, FeaturedComplex):
        c = c.complex
    if r < 1:
        raise OperatorError("boundary_matrix needs r >= 1")
    if isinstance(c, (Hypergraph, CombinatorialComplex)) and signed:
        raise OperatorError(f"signed boundaries are undefined on a {kind_of(c)} complex")
    if isinstance(c, Hypergraph) and r != 1:
        raise OperatorError("hypergraphs only expose the rank-1 incidence")
    _require_rank(c, r, f"B_{{{r - 1},{r}}}")
    _require_rank(c, r - 1, f"B_{{{r - 1},{r}}}")

    faces = rank_cells(c, r - 1)
    cells = rank_cells(c, r)
    index = {f: i for i, f in enumerate(faces)}
    entries = []
    for j, cell in enumerate(cells):
        for i_face, (face, sign) in enumerate(_signed_faces(c, r, cell)):
            entries.append((index[face], j, float(sign) if signed else 1.0))
    return SparseOperator.from_entries(
        (len(faces), len(cells)), entries, source_rank=r, target_rank=r - 1, signed=signed
    )


def _signed_faces(c: AnyComplex, r: int, cell):
    """(face, sign) pairs for one cell; face keys match rank_cells order keys."""
    if isinstance(c, SimplicialComplex):
        return [(cell[:i] + cell[i + 1 :], (-1) ** i) for i in range(len(cell))]
    if isinstance(c, CellComplex) and r == 2:
        m = len(cell)
        out = []
        for i in range(m):
            u, v = cell[i], cell[(i + 1) % m]
            out.append(((min(u, v), max(u, v)), 1 if u < v else -1))
        return out
    if (isinstance(c, (Graph, CellComplex)) and r == 1):
        u, v = cell
        return [((u,), -1), ((v,), 1)]
    # hypergraph hyperedges / combinatorial subset containment: unsigned
    return [(f, 1) for f in cell_faces(c, r, cell)]


def adjacency_matrix(c: AnyComplex | FeaturedComplex, r: int, via: str) -> SparseOperator:
    """Unsigned same-rank adjacency through shared cofaces (up) or faces (down).

    Entry (x, y) = 1 for x != y iff the two rank-r cells share a rank
    r+1 coface (up) or a rank r-1 face (down); the diagonal is zero.
    """
    if isinstance(c, FeaturedComplex):
        c = c.complex
    if via not in ("up", "down"):
        raise OperatorError(f"via must be 'up' or 'down', got {via!r}")
    cells = rank_cells(c, r)
    _require_rank(c, r, f"A_{r}")
    other = r + 1 if via == "up" else r - 1
    _require_rank(c, other, f"{via}-adjacency at rank {r}")

    index = {x: i for i, x in enumerate(cells)}
    pairs: set[tuple[int, int]] = set()
    if via == "up":
        for coface in rank_cells(c, r + 1):
            members = sorted(index[f] for f in set(cell_faces(c, r + 1, coface)))
            pairs.update((a, b) for k, a in enumerate(members) for b in members[k + 1 :])
    else:
        by_face: dict = {}
        for i, cell in enumerate(cells):
            for face in set(cell_faces(c, r, cell)):
                by_face.setdefault(face, []).append(i)
        for members in by_face.values():
            pairs.update((a, b) for k, a in enumerate(members) for b in members[k + 1 :])
    entries = [(a, b, 1.0) for a, b in pairs] + [(b, a, 1.0) for a, b in pairs]
    n = len(cells)
    return SparseOperator.from_entries((n, n), entries, source_rank=r, target_rank=r, signed=False)


@dataclass(frozen=True)
class NeighborhoodSpec:
    """One neighborhood function, named by how it moves signals.

    ``rank`` is the target rank (the cells receiving messages). The
    source rank follows from the kind: r+1 for up_incidence, r-1 for
    down_incidence, r otherwise.
    """

    kind: str
    rank: int
    signed: bool = False

    def __post_init__(self):
        if self.kind not in NEIGHBORHOOD_KINDS:
            raise OperatorError(f"unknown neighborhood kind {self.kind!r}")

    @property
    def source_rank(self) -> int:
        if self.kind == "up_incidence":
            return self.rank + 1
        if self.kind == "down_incidence":
            return self.rank - 1
        return self.rank


def resolve_neighborhood(c: AnyComplex | FeaturedComplex, spec: NeighborhoodSpec) -> SparseOperator:
    """Materialize a neighborhood as an (n_target x n_source) operator."""
    if isinstance(c, FeaturedComplex):
        c = c.complex
    r = spec.rank
    if spec.kind == "identity":
        _require_rank(c, r, "identity")
        return identity_operator(len(rank_cells(c, r)), r)
    if spec.kind == "up_incidence":
        return boundary_matrix(c, r + 1, spec.signed)
    if spec.kind == "down_incidence":
        return boundary_matrix(c, r, spec.signed).transpose()
    if spec.signed:
        raise OperatorError("adjacencies are unsigned")
    return adjacency_matrix(c, r, "up" if spec.kind == "up_adjacency" else "down")
