import numpy as np
import pytest

from oracles import (
    brute_force_clique_counts,
    random_graph_edges,
    subset_closure_counts,
    union_find_components,
)

from topoforge.complexes import (
    build_graph,
    cell_counts,
    cell_faces,
    rank_cells,
    validate_complex,
)
from topoforge.liftings import (
    LiftingConfig,
    LiftingRefusal,
    apply_lifting,
    lift_clique,
    lift_cycle,
    lift_features_projected_sum,
    lift_khop,
    lift_knn,
    lift_neighborhood,
)


def counts_of(c):
    return tuple(n for _, n in cell_counts(c))


def k_n(n):
    return build_graph(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def test_clique_k3():
    assert counts_of(lift_clique(k_n(3), 3)) == (3, 3, 1, 0)


def test_clique_k4_matches_bruteforce():
    g = k_n(4)
    sc = lift_clique(g, 3)
    assert counts_of(sc) == tuple(brute_force_clique_counts(4, g.edges, 3))
    assert counts_of(sc) == (4, 6, 4, 1)


def test_clique_random_graphs_match_bruteforce():
    for seed in range(40):
        n = 6 + seed % 9
        edges = random_graph_edges(n, (0.1, 0.3, 0.5)[seed % 3], seed)
        g = build_graph(n, edges)
        for max_dim in (2, 3):
            got = counts_of(lift_clique(g, max_dim))
            assert got == tuple(brute_force_clique_counts(n, edges, max_dim)), (seed, max_dim)


def test_clique_monotone_in_max_dim():
    for seed in range(10):
        g = build_graph(10, random_graph_edges(10, 0.4, seed))
        lo = lift_clique(g, 2)
        hi = lift_clique(g, 3)
        assert hi.cells[:3] == lo.cells


def test_neighborhood_star():
    g = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    sc = lift_neighborhood(g, 3, 10)
    assert counts_of(sc) == (4, 6, 4, 1)
    # oracle: closure of the closed neighborhoods
    tops = [{0, 1, 2, 3}, {0, 1}, {0, 2}, {0, 3}]
    assert list(counts_of(sc)) == subset_closure_counts(tops, 4)


def test_neighborhood_single_edge_and_empty():
    assert counts_of(lift_neighborhood(build_graph(2, [(0, 1)]), 3, 10)) == (2, 1)
    assert counts_of(lift_neighborhood(build_graph(3, []), 3, 10)) == (3, 0)


def test_neighborhood_guard_refuses():
    star = build_graph(8, [(0, v) for v in range(1, 8)])
    with pytest.raises(LiftingRefusal, match="node 0"):
        lift_neighborhood(star, 2, 5)


def test_neighborhood_oversized_inserts_subsets():
    star = build_graph(5, [(0, v) for v in range(1, 5)])
    sc = lift_neighborhood(star, 2, 10)
    # closed neighborhood of 0 has 5 vertices -> all 3-subsets
    tops = [(0, v) for v in range(1, 5)]
    from itertools import combinations

    tops3 = list(combinations((0, 1, 2, 3, 4), 3))
    assert list(counts_of(sc)) == subset_closure_counts(tops3 + tops, 5)


def test_cycle_k3_k4():
    assert lift_cycle(k_n(3)).two_cells == ((0, 1, 2),)
    cc = lift_cycle(k_n(4))
    assert len(cc.two_cells) == 6 - 4 + 1


def test_cycle_count_law_random():
    for seed in range(60):
        n = 5 + seed % 16
        edges = random_graph_edges(n, (0.1, 0.3, 0.5)[seed % 3], seed + 1000)
        g = build_graph(n, edges)
        cc = lift_cycle(g)
        expect = len(g.edges) - n + union_find_components(n, g.edges)
        assert len(cc.two_cells) == expect, seed
        assert validate_complex(cc) is None


def test_cycle_length_cap():
    ring = build_graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert len(lift_cycle(ring).two_cells) == 1
    assert lift_cycle(ring, max_cell_length=5).two_cells == ()


def test_khop_p3():
    hg = lift_khop(build_graph(3, [(0, 1), (1, 2)]), 1)
    assert hg.hyperedges == ((0, 1), (0, 1, 2), (1, 2))


def test_khop_k3_collapses():
    assert lift_khop(k_n(3), 1).hyperedges == ((0, 1, 2),)


def test_khop_cardinality():
    for seed in range(20):
        n = 4 + seed % 12
        g = build_graph(n, random_graph_edges(n, 0.3, seed + 7))
        hg = lift_khop(g, 1)
        assert len(hg.hyperedges) <= n
        big = lift_khop(g, n)  # k large enough: one hyperedge per component
        assert len(big.hyperedges) == union_find_components(n, g.edges)


def test_knn_line_features():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)], features=[[0.0], [1.0], [2.0], [10.0]])
    hg = lift_knn(g, 1)
    assert hg.hyperedges == ((0, 1), (1, 2), (2, 3))


def test_knn_ties_and_two_nodes():
    g = build_graph(3, [], features=np.zeros((3, 1)))
    assert lift_knn(g, 1).hyperedges == ((0, 1), (0, 2))
    two = build_graph(2, [(0, 1)], features=np.eye(2))
    assert lift_knn(two, 1).hyperedges == ((0, 1),)


def test_knn_matches_exhaustive_distances():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((8, 3))
    g = build_graph(8, random_graph_edges(8, 0.3, 5), features=x)
    hg = lift_knn(g, 2)
    expect = set()
    for v in range(8):
        ranked = sorted(range(8), key=lambda u: (float(((x[v] - x[u]) ** 2).sum()), u))
        ranked = [u for u in ranked if u != v]
        expect.add(tuple(sorted({v, *ranked[:2]})))
    assert set(hg.hyperedges) == expect


def test_knn_requires_features():
    with pytest.raises(ValueError, match="features"):
        lift_knn(build_graph(3, [(0, 1)]), 1)


def test_projected_sum_k3():
    sc = lift_clique(k_n(3), 2)
    feats = lift_features_projected_sum(sc, [[1.0], [2.0], [3.0]])
    assert feats[1].ravel().tolist() == [3.0, 4.0, 5.0]
    assert feats[2].ravel().tolist() == [12.0]


def test_projected_sum_zero_and_hypergraph():
    sc = lift_clique(k_n(3), 2)
    feats = lift_features_projected_sum(sc, np.zeros((3, 2)))
    assert all(np.all(m == 0) for m in feats.values())
    hg = lift_khop(build_graph(3, [(0, 1), (1, 2)]), 1)
    feats = lift_features_projected_sum(hg, [[1.0], [2.0], [3.0]])
    assert feats[1].ravel().tolist() == [3.0, 6.0, 5.0]


def test_projected_sum_equals_face_sums():
    # F_2(psi_X(x)) = psi_F(F_1(x)) at the implementation level
    for seed in range(10):
        g = build_graph(10, random_graph_edges(10, 0.4, seed + 77))
        fc = apply_lifting(
            build_graph(10, g.edges, features=np.random.default_rng(seed).standard_normal((10, 2))),
            LiftingConfig("clique", max_dim=3),
        )
        c = fc.complex
        for r in sorted(fc.features):
            if r == 0:
                continue
            below = {cell: fc.features[r - 1][i] for i, cell in enumerate(rank_cells(c, r - 1))}
            for i, cell in enumerate(rank_cells(c, r)):
                manual = sum(below[f] for f in cell_faces(c, r, cell))
                assert np.allclose(fc.features[r][i], manual, atol=1e-12)


def test_apply_lifting_composition_and_fallback():
    g = build_graph(3, [(0, 1), (0, 2), (1, 2)], features=np.eye(3), labels=[0, 1, 0])
    fc = apply_lifting(g, LiftingConfig("clique", max_dim=2))
    assert sorted(fc.features) == [0, 1, 2]
    assert np.array_equal(fc.features[0], np.eye(3))
    assert fc.node_labels.tolist() == [0, 1, 0]
    assert validate_complex(fc) is None

    bare = build_graph(3, [(0, 1), (0, 2), (1, 2)])
    fb = apply_lifting(bare, LiftingConfig("clique", max_dim=2))
    assert np.array_equal(fb.features[0], np.ones((3, 1)))
    assert fb.features[1].ravel().tolist() == [2.0, 2.0, 2.0]


def test_all_liftings_validate_on_random_graphs():
    rng = np.random.default_rng(11)
    cfgs = [
        LiftingConfig("clique", max_dim=3),
        LiftingConfig("neighborhood", max_dim=2, max_neighborhood_size=40),
        LiftingConfig("cycle"),
        LiftingConfig("khop", k=2),
        LiftingConfig("knn", k=2),
    ]
    for seed in range(40):
        n = 5 + seed % 26
        edges = random_graph_edges(n, (0.1, 0.3, 0.5)[seed % 3], seed)
        g = build_graph(n, edges, features=rng.standard_normal((n, 3)))
        for cfg in cfgs:
            fc = apply_lifting(g, cfg)
            assert validate_complex(fc) is None, (seed, cfg.structural)
