"""Independent brute-force oracles the library tests check against.

Everything here is deliberately naive: exhaustive subset enumeration,
union-find, dense loops. None of it shares code with the package.
"""

from __future__ import annotations

import random
from itertools import combinations

import numpy as np


def random_graph_edges(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    """Seeded Erdos-Renyi edge list over nodes 0..n-1."""
    rng = random.Random(seed)
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def brute_force_clique_counts(n: int, edges, max_dim: int) -> list[int]:
    """Count (r+1)-cliques for r = 0..max_dim by testing every vertex subset."""
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[u, v] = adj[v, u] = True
    counts = [n]
    for r in range(1, max_dim + 1):
        total = 0
        for subset in combinations(range(n), r + 1):
            if all(adj[a, b] for a, b in combinations(subset, 2)):
                total += 1
        counts.append(total)
    return counts


def brute_force_cliques(n: int, edges, size: int) -> list[tuple[int, ...]]:
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[u, v] = adj[v, u] = True
    return [
        s for s in combinations(range(n), size) if all(adj[a, b] for a, b in combinations(s, 2))
    ]


def union_find_components(n: int, edges) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps


def subset_closure_counts(top_simplices, n: int) -> list[int]:
    """Cell counts of the downward closure of the given vertex sets."""
    by_rank: dict[int, set] = {0: {(v,) for v in range(n)}}
    for top in top_simplices:
        top = tuple(sorted(top))
        for k in range(1, len(top) + 1):
            for sub in combinations(top, k):
                by_rank.setdefault(k - 1, set()).add(sub)
    max_rank = max(by_rank)
    return [len(by_rank.get(r, ())) for r in range(max_rank + 1)]


def pairwise_auc(scores, labels) -> float:
    """AUC by comparing every positive-negative pair (ties count half)."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    wins = sum(1.0 if p > q else 0.5 if p == q else 0.0 for p in pos for q in neg)
    return wins / (len(pos) * len(neg))


def dense_graph_message_pass(adj: np.ndarray, h: np.ndarray, w: np.ndarray,
                             u: np.ndarray | None, agg: str, update: str) -> np.ndarray:
    """One round of plain graph message passing, written as explicit loops.

    Messages m(h_k, h_i) = W h_i over the one-hop neighborhood, aggregated
    by sum or mean, then the chosen node update.
    """
    n = adj.shape[0]
    msgs = np.zeros((n, w.shape[1]))
    for k in range(n):
        nbrs = [i for i in range(n) if adj[k, i]]
        acc = np.zeros(w.shape[1])
        for i in nbrs:
            acc = acc + h[i] @ w
        if agg == "mean" and nbrs:
            acc = acc / len(nbrs)
        msgs[k] = acc
    if update == "identity":
        return msgs
    pre = h @ u + msgs
    out = np.maximum(pre, 0.0)
    if update == "relu_residual":
        out = out + h
    return out
