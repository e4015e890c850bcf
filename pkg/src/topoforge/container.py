"""Container documents: one UTF-8 JSON file per complex.

Top-level keys, in order: ``kind``, ``num_nodes``, ``cells`` (per-rank
arrays of sorted id arrays; hyperedges under ``"hyperedges"``),
``two_cells`` (cell complexes), ``features`` (per-rank flat row-major
64-bit reals; JSON's shortest round-trip decimal text keeps them
bit-exact), then optional ``labels``, ``targets``, ``graph_label``.

Write-then-read reproduces a structurally equal value, bit-for-bit in
the features.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .complexes import (
    AnyComplex,
    CellComplex,
    CombinatorialComplex,
    FeaturedComplex,
    Graph,
    Hypergraph,
    SimplicialComplex,
    Violation,
    kind_of,
    rank_cells,
    validate_complex,
)

__all__ = ["SchemaError", "write_complex", "read_complex", "complex_io"]

KINDS = ("graph", "simplicial", "cell", "hypergraph", "combinatorial")


class SchemaError(ValueError):
    """Container file violates the schema; message carries file/field context."""

    def __init__(self, path, field: str, detail: str):
        self.path = path
        self.field = field
        self.detail = detail
        super().__init__(f"{path}: {field}: {detail}")


def _cells_payload(c: AnyComplex) -> dict:
    if isinstance(c, Graph):
        return {"1": [list(e) for e in c.edges]}
    if isinstance(c, SimplicialComplex):
        return {str(r): [list(x) for x in c.cells[r]] for r in range(c.max_rank + 1)}
    if isinstance(c, CellComplex):
        return {"1": [list(e) for e in c.edges]}
    if isinstance(c, Hypergraph):
        return {"hyperedges": [list(h) for h in c.hyperedges]}
    if isinstance(c, CombinatorialComplex):
        ranks = sorted(set(c.ranks)) if c.ranks else []
        return {str(r): [list(x) for x in rank_cells(c, r)] for r in ranks}
    raise TypeError(type(c).__name__)


def write_complex(value: AnyComplex | FeaturedComplex, path) -> None:
    """Serialize a complex (featured or bare) to a container file."""
    bad = validate_complex(value)
    if bad is not None:
        raise SchemaError(path, bad.invariant, str(bad))
    fc = value if isinstance(value, FeaturedComplex) else None
    c = value.complex if fc is not None else value

    doc: dict = {"kind": kind_of(c), "num_nodes": len(rank_cells(c, 0))}
    doc["cells"] = _cells_payload(c)
    if isinstance(c, CellComplex):
        doc["two_cells"] = [list(x) for x in c.two_cells]

    features = dict(fc.features) if fc is not None else {}
    if isinstance(c, Graph) and fc is None:
        if c.node_features is not None:
            features[0] = c.node_features
    if features:
        doc["features"] = {str(r): np.asarray(m, dtype=np.float64).ravel().tolist()
                           for r, m in sorted(features.items())}

    labels = fc.node_labels if fc is not None else getattr(c, "node_labels", None)
    targets = fc.node_targets if fc is not None else getattr(c, "node_targets", None)
    graph_label = fc.graph_label if fc is not None else getattr(c, "graph_label", None)
    if labels is not None:
        doc["labels"] = [int(x) for x in labels]
    if targets is not None:
        doc["targets"] = [float(x) for x in targets]
    if graph_label is not None:
        doc["graph_label"] = graph_label

    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def _expect(cond: bool, path, field: str, detail: str):
    if not cond:
        raise SchemaError(path, field, detail)


def _int_cells(raw, path, field) -> tuple[tuple[int, ...], ...]:
    _expect(isinstance(raw, list), path, field, "expected an array of cells")
    out = []
    for cell in raw:
        _expect(isinstance(cell, list) and all(isinstance(v, int) for v in cell),
                path, field, f"cell {cell!r} is not an integer array")
        out.append(tuple(cell))
    return tuple(out)


def read_complex(path):
    """Parse and validate a container file; returns the typed value."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SchemaError(path, "document", str(e)) from e
    _expect(isinstance(doc, dict), path, "document", "not a JSON object")
    kind = doc.get("kind")
    _expect(kind in KINDS, path, "kind", f"{kind!r} not one of {KINDS}")
    num_nodes = doc.get("num_nodes")
    _expect(isinstance(num_nodes, int) and num_nodes >= 0, path, "num_nodes", "must be a count")
    cells_raw = doc.get("cells", {})
    _expect(isinstance(cells_raw, dict), path, "cells", "expected per-rank object")

    if kind == "graph":
        edges = _int_cells(cells_raw.get("1", []), path, "cells.1")
        c: AnyComplex = Graph(num_nodes, edges)
    elif kind == "simplicial":
        ranks = sorted(int(r) for r in cells_raw)
        _expect(ranks == list(range(len(ranks))), path, "cells", f"ranks {ranks} not contiguous from 0")
        cells = tuple(_int_cells(cells_raw[str(r)], path, f"cells.{r}") for r in ranks)
        c = SimplicialComplex(len(ranks) - 1, cells)
    elif kind == "cell":
        edges = _int_cells(cells_raw.get("1", []), path, "cells.1")
        two = _int_cells(doc.get("two_cells", []), path, "two_cells")
        c = CellComplex(num_nodes, edges, two)
    elif kind == "hypergraph":
        hes = _int_cells(cells_raw.get("hyperedges", []), path, "cells.hyperedges")
        c = Hypergraph(num_nodes, hes)
    else:
        pairs = []
        for r_str in sorted(cells_raw, key=int):
            for cell in _int_cells(cells_raw[r_str], path, f"cells.{r_str}"):
                pairs.append((cell, int(r_str)))
        pairs.sort(key=lambda t: (t[1], t[0]))
        c = CombinatorialComplex(num_nodes, tuple(x for x, _ in pairs), tuple(r for _, r in pairs))

    bad: Violation | None = validate_complex(c)
    if bad is not None:
        raise SchemaError(path, bad.invariant, str(bad))

    features = {}
    for r_str, flat in (doc.get("features") or {}).items():
        r = int(r_str)
        n = len(rank_cells(c, r))
        _expect(isinstance(flat, list) and all(isinstance(v, (int, float)) for v in flat),
                path, f"features.{r}", "expected a flat numeric array")
        _expect(n > 0, path, f"features.{r}", "features attached to an unpopulated rank")
        _expect(len(flat) % n == 0, path, f"features.{r}",
                f"{len(flat)} values do not tile {n} cells")
        features[r] = np.array(flat, dtype=np.float64).reshape(n, -1)

    labels = doc.get("labels")
    targets = doc.get("targets")
    graph_label = doc.get("graph_label")
    if labels is not None:
        _expect(isinstance(labels, list) and len(labels) == num_nodes, path, "labels",
                f"expected {num_nodes} node labels")
        labels = np.array(labels, dtype=np.int64)
    if targets is not None:
        _expect(isinstance(targets, list) and len(targets) == num_nodes, path, "targets",
                f"expected {num_nodes} node targets")
        targets = np.array(targets, dtype=np.float64)

    if kind == "graph" and set(features) <= {0}:
        return Graph(num_nodes, c.edges, features.get(0), labels, targets, graph_label)
    return FeaturedComplex(c, features, labels, targets, graph_label)


def complex_io(value, direction: str, path):
    """Spec-shaped dispatcher over :func:`write_complex` / :func:`read_complex`."""
    if direction == "write":
        write_complex(value, path)
        return None
    if direction == "read":
        return read_complex(path)
    raise ValueError(f"direction must be 'read' or 'write', got {direction!r}")
