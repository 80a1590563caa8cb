"""Centrality, per-cluster landmark selection, and distance vectors.

A landmark is the most central member of its cluster. Every node then carries
a K-vector of hop distances to the K landmarks; the minimum over landmarks of
d(u, landmark) + d(landmark, v) upper-bounds the true distance d(u, v) and is
the detour distance used throughout this package.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .clustering import Partition
from .graph import UNREACHABLE, Graph, bfs_distances

#: betweenness/closeness walk the whole graph from every node; refuse above this
CENTRALITY_NODE_CAP = 50_000

CENTRALITY_KINDS = ("degree", "betweenness", "closeness")


@dataclass(frozen=True)
class LandmarkProfile:
    """Selected landmarks and (once computed) the N x K hop-distance matrix.

    ``dist[v, k]`` is the exact hop count from v to ``landmarks[k]`` when they
    share a component, else the sentinel. The sentinel is one above the
    largest finite entry, so it strictly dominates every stored distance while
    keeping feature scales tight.
    """

    landmarks: np.ndarray
    centrality: str = "degree"
    dist: np.ndarray | None = None
    sentinel: int | None = None

    @property
    def k(self) -> int:
        return len(self.landmarks)


def centrality(g: Graph, kind: str = "degree", node_cap: int = CENTRALITY_NODE_CAP) -> np.ndarray:
    """Per-node centrality scores.

    degree: neighbor count. betweenness: Brandes accumulation over all
    shortest paths (each unordered pair counted once). closeness:
    (reachable - 1) / sum of distances, computed within the node's component.
    """
    if kind not in CENTRALITY_KINDS:
        raise ValueError(f"unknown centrality kind {kind!r}")
    if kind == "degree":
        return g.degrees().astype(np.float64)
    if g.num_nodes > node_cap:
        raise ValueError(
            f"{kind} centrality needs all-pairs traversal; graph has "
            f"{g.num_nodes} nodes, cap is {node_cap}"
        )
    if kind == "closeness":
        return _closeness(g)
    return _betweenness(g)


def _closeness(g: Graph) -> np.ndarray:
    n = g.num_nodes
    out = np.zeros(n, dtype=np.float64)
    for v in range(n):
        dist = bfs_distances(g, v)
        reach = dist >= 0
        total = int(dist[reach].sum())
        count = int(reach.sum())
        if count > 1 and total > 0:
            out[v] = (count - 1) / total
    return out


def _betweenness(g: Graph) -> np.ndarray:
    n = g.num_nodes
    bc = np.zeros(n, dtype=np.float64)
    adj = [g.neighbors(v).tolist() for v in range(n)]
    for s in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n, dtype=np.float64)
        sigma[s] = 1.0
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v]
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n, dtype=np.float64)
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return bc / 2.0  # undirected: each pair got accumulated from both endpoints


def select_landmarks(
    g: Graph,
    partition: Partition,
    kind: str = "degree",
    scope: str = "global",
    node_cap: int = CENTRALITY_NODE_CAP,
) -> LandmarkProfile:
    """Pick the highest-centrality member of each cluster (ties: smallest index).

    ``scope="global"`` scores nodes on the full graph (the default);
    ``scope="cluster"`` scores each node within its induced cluster subgraph.
    """
    if scope not in ("global", "cluster"):
        raise ValueError(f"unknown scope {scope!r}")
    landmarks = np.empty(partition.k, dtype=np.int64)
    if scope == "global":
        scores = centrality(g, kind, node_cap=node_cap)
        for c in range(partition.k):
            members = partition.members(c)  # ascending, so argmax takes the smallest index
            landmarks[c] = members[int(np.argmax(scores[members]))]
    else:
        for c in range(partition.k):
            members = partition.members(c)
            sub_scores = centrality(g.subgraph(members), kind, node_cap=node_cap)
            landmarks[c] = members[int(np.argmax(sub_scores))]
    return LandmarkProfile(landmarks, centrality=kind)


def distance_vectors(g: Graph, landmarks) -> LandmarkProfile:
    """One BFS per landmark fills the N x K distance matrix.

    Unreachable entries are set to the sentinel (max finite entry + 1). The
    BFS columns are independent, so callers may parallelize over landmarks;
    assembly here is sequential and deterministic.
    """
    if isinstance(landmarks, LandmarkProfile):
        profile = landmarks
    else:
        profile = LandmarkProfile(np.asarray(landmarks, dtype=np.int64))
    lam = profile.landmarks
    if lam.size == 0:
        raise ValueError("need at least one landmark")
    if lam.min() < 0 or lam.max() >= g.num_nodes:
        raise ValueError("landmark index out of range")
    if len(np.unique(lam)) != lam.size:
        raise ValueError("duplicate landmarks")

    dist = np.empty((g.num_nodes, lam.size), dtype=np.int64)
    for k, node in enumerate(lam):
        dist[:, k] = bfs_distances(g, int(node))
    finite = dist != UNREACHABLE
    sentinel = int(dist[finite].max()) + 1
    dist[~finite] = sentinel
    return replace(profile, dist=dist, sentinel=sentinel)


def min_detour(profile: LandmarkProfile, u: int, v: int) -> int:
    """Minimum over landmarks of d(u, landmark) + d(landmark, v).

    Landmarks unreachable from either endpoint are skipped; UNREACHABLE (-1)
    is returned when no landmark reaches both.
    """
    if profile.dist is None:
        raise ValueError("profile has no distance matrix; run distance_vectors first")
    du = profile.dist[u]
    dv = profile.dist[v]
    ok = (du != profile.sentinel) & (dv != profile.sentinel)
    if not ok.any():
        return UNREACHABLE
    return int((du[ok] + dv[ok]).min())


def min_detour_many(profile: LandmarkProfile, us, vs) -> np.ndarray:
    """Vectorized :func:`min_detour` over paired index arrays."""
    if profile.dist is None:
        raise ValueError("profile has no distance matrix; run distance_vectors first")
    du = profile.dist[np.asarray(us, dtype=np.int64)]
    dv = profile.dist[np.asarray(vs, dtype=np.int64)]
    total = (du + dv).astype(np.float64)
    total[(du == profile.sentinel) | (dv == profile.sentinel)] = np.inf
    best = total.min(axis=1)
    out = np.where(np.isfinite(best), best, UNREACHABLE).astype(np.int64)
    return out
