import json

import numpy as np
import pytest

from topoforge.complexes import (
    CellComplex,
    CombinatorialComplex,
    FeaturedComplex,
    Hypergraph,
    build_graph,
)
from topoforge.container import SchemaError, complex_io, read_complex, write_complex
from topoforge.liftings import LiftingConfig, apply_lifting, lift_clique


def test_roundtrip_simplicial(tmp_path):
    sc = lift_clique(build_graph(3, [(0, 1), (0, 2), (1, 2)]), 2)
    p = tmp_path / "k3.json"
    write_complex(sc, p)
    assert read_complex(p) == sc


def test_roundtrip_featured_bitwise(tmp_path):
    rng = np.random.default_rng(0)
    g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
                    features=rng.standard_normal((5, 3)), labels=[0, 1, 0, 1, 1])
    fc = apply_lifting(g, LiftingConfig("cycle"))
    p = tmp_path / "cyc.json"
    write_complex(fc, p)
    back = read_complex(p)
    assert isinstance(back, FeaturedComplex)
    assert back.complex == fc.complex
    for r in fc.features:
        assert back.features[r].tobytes() == fc.features[r].tobytes()
    assert back.node_labels.tolist() == fc.node_labels.tolist()


def test_roundtrip_graph_with_label(tmp_path):
    g = build_graph(2, [(0, 1)], features=[[0.25], [1e-17]], graph_label=3)
    p = tmp_path / "g.json"
    write_complex(g, p)
    back = read_complex(p)
    assert back == g
    assert back.node_features.tobytes() == g.node_features.tobytes()


def test_roundtrip_hypergraph_and_combinatorial(tmp_path):
    hg = Hypergraph(3, ((0, 1), (0, 1, 2)))
    write_complex(hg, tmp_path / "h.json")
    assert read_complex(tmp_path / "h.json") == hg

    ccc = CombinatorialComplex(2, ((0,), (1,), (0, 1)), (0, 0, 2))
    write_complex(ccc, tmp_path / "c.json")
    assert read_complex(tmp_path / "c.json") == ccc


def test_read_rejects_unsorted_simplex(tmp_path):
    doc = {
        "kind": "simplicial",
        "num_nodes": 2,
        "cells": {"0": [[0], [1]], "1": [[1, 0]]},
    }
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(SchemaError) as err:
        read_complex(p)
    assert "(1, 0)" in str(err.value)


def test_read_rejects_garbage(tmp_path):
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    with pytest.raises(SchemaError):
        read_complex(p)
    p2 = tmp_path / "badkind.json"
    p2.write_text(json.dumps({"kind": "mystery", "num_nodes": 1, "cells": {}}))
    with pytest.raises(SchemaError, match="kind"):
        read_complex(p2)


def test_write_rejects_invalid_value(tmp_path):
    broken = CellComplex(3, ((0, 1),), ((0, 1, 2),))
    with pytest.raises(SchemaError):
        write_complex(broken, tmp_path / "x.json")


def test_key_order(tmp_path):
    fc = apply_lifting(build_graph(3, [(0, 1), (0, 2), (1, 2)]), LiftingConfig("cycle"))
    p = tmp_path / "o.json"
    write_complex(fc, p)
    keys = list(json.loads(p.read_text()))
    assert keys == ["kind", "num_nodes", "cells", "two_cells", "features"]


def test_complex_io_dispatch(tmp_path):
    g = build_graph(2, [(0, 1)])
    p = tmp_path / "d.json"
    assert complex_io(g, "write", p) is None
    assert complex_io(None, "read", p) == g
    with pytest.raises(ValueError):
        complex_io(g, "sideways", p)
