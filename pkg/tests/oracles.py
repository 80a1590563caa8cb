"""Independent brute-force oracles the production code is checked against.

Everything here is deliberately naive (cubic Floyd-Warshall, explicit path
enumeration, pairwise metric loops) and shares no code path with the package.
"""

from __future__ import annotations

import itertools

import numpy as np


def floyd_warshall(n: int, edges) -> np.ndarray:
    """All-pairs hop distances; -1 where unreachable."""
    inf = float("inf")
    d = np.full((n, n), inf)
    np.fill_diagonal(d, 0.0)
    for u, v in edges:
        d[u, v] = 1.0
        d[v, u] = 1.0
    for k in range(n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    out = np.where(np.isfinite(d), d, -1.0)
    return out.astype(np.int64)


def union_find_components(n: int, edges) -> list[set[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, set[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def brute_betweenness(n: int, edges) -> np.ndarray:
    """Enumerate every shortest path of every pair; count interior visits."""
    dist = floyd_warshall(n, edges)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)

    def all_shortest_paths(s, t):
        if dist[s, t] < 0:
            return []
        paths = []

        def walk(node, path):
            if node == t:
                paths.append(list(path))
                return
            for nb in adj[node]:
                if dist[s, nb] == dist[s, node] + 1 and dist[nb, t] == dist[node, t] - 1:
                    path.append(nb)
                    walk(nb, path)
                    path.pop()

        walk(s, [s])
        return paths

    bc = np.zeros(n)
    for s, t in itertools.combinations(range(n), 2):
        paths = all_shortest_paths(s, t)
        if not paths:
            continue
        for p in paths:
            for node in p[1:-1]:
                bc[node] += 1.0 / len(paths)
    return bc


def brute_auc(pos, neg) -> float:
    import math

    wins = []
    for p in pos:
        for q in neg:
            if p > q:
                wins.append(1.0)
            elif p == q:
                wins.append(0.5)
    return math.fsum(wins) / (len(pos) * len(neg))


def brute_hits_at_k(pos, neg, k: int) -> float:
    kth = sorted(neg, reverse=True)[k - 1]
    return sum(1 for p in pos if p > kth) / len(pos)


def brute_mrr(pos, neg, npp: int) -> float:
    import math

    pool = list(neg[: min(npp, len(neg))])
    recips = []
    for p in pos:
        rank = 1 + sum(1 for q in pool if q >= p)
        recips.append(1.0 / rank)
    return math.fsum(recips) / len(pos)


def brute_adamic_adar(adj_sets, u, v) -> float:
    import math

    common = adj_sets[u] & adj_sets[v]
    return sum(1.0 / math.log(len(adj_sets[w])) for w in common)


def eig_2x2(m) -> np.ndarray:
    """Closed-form eigenvalues of a symmetric 2x2 matrix."""
    a, b, c = m[0, 0], m[0, 1], m[1, 1]
    mean = (a + c) / 2.0
    r = np.sqrt(((a - c) / 2.0) ** 2 + b * b)
    return np.sort(np.array([mean - r, mean + r]))


def eig_charpoly_3x3(m) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 via its characteristic polynomial roots."""
    a = np.asarray(m, dtype=float)
    c2 = -np.trace(a)
    c1 = (np.trace(a) ** 2 - np.trace(a @ a)) / 2.0
    c0 = -np.linalg.det(a)
    roots = np.roots([1.0, c2, c1, c0])
    return np.sort(roots.real)


def random_edges(rng, n: int, p: float):
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return edges
