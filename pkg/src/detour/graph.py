"""Undirected graph core: CSR storage, edge-list ingestion, BFS, components.

Graphs are unweighted and immutable after construction. Neighbor lists are
stored in compressed sparse row form (``indptr``/``indices``) with every
per-node list sorted ascending, so iteration order is deterministic and
concurrent read-only traversals are safe.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

#: Marker used in distance arrays for nodes in a different component.
UNREACHABLE = -1


@dataclass(frozen=True)
class IngestReport:
    """What an edge-list ingestion kept and dropped."""

    nodes: int
    edges: int
    duplicate_edges: int
    self_loops: int

    def summary(self) -> str:
        return (
            f"loaded {self.nodes} nodes, {self.edges} edges "
            f"(dropped {self.duplicate_edges} duplicate edges, "
            f"{self.self_loops} self-loops)"
        )


@dataclass(frozen=True)
class ComponentMap:
    """Connected-component labelling: dense ids 0..count-1, one per node."""

    ids: np.ndarray
    sizes: np.ndarray
    count: int

    def nodes_of(self, component: int) -> np.ndarray:
        return np.flatnonzero(self.ids == component)

    def largest(self) -> np.ndarray:
        """Nodes of the largest component (smallest id wins ties)."""
        return self.nodes_of(int(np.argmax(self.sizes)))


class Graph:
    """Immutable undirected graph over dense node indices 0..N-1.

    ``labels`` optionally maps each dense index back to the external string
    label it was ingested under (first-seen order).
    """

    __slots__ = ("indptr", "indices", "labels", "_label_index")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, labels: list[str] | None = None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.labels = labels
        self._label_index = None

    @property
    def num_nodes(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor indices of ``v`` (a view, do not mutate)."""
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        """Per-node degree sequence; sums to twice the edge count."""
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        return i < len(nb) and nb[i] == v

    def index_of(self, label: str) -> int:
        if self.labels is None:
            raise KeyError("graph has no external labels")
        if self._label_index is None:
            self._label_index = {s: i for i, s in enumerate(self.labels)}
        return self._label_index[label]

    def edges(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def subgraph(self, nodes) -> "Graph":
        """Induced subgraph; new index i corresponds to old index ``nodes[i]``.

        ``nodes`` must be unique; it is sorted internally so the mapping is by
        ascending old index.
        """
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        new_id = np.full(self.num_nodes, -1, dtype=np.int64)
        new_id[nodes] = np.arange(len(nodes), dtype=np.int64)
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), self.degrees())
        keep = (new_id[src] >= 0) & (new_id[self.indices] >= 0)
        s = new_id[src[keep]]
        d = new_id[self.indices[keep]]
        order = np.lexsort((d, s))
        s, d = s[order], d[order]
        indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
        np.cumsum(np.bincount(s, minlength=len(nodes)), out=indptr[1:])
        labels = None if self.labels is None else [self.labels[i] for i in nodes]
        return Graph(indptr, d, labels)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(n={self.num_nodes}, m={self.num_edges})"

    @classmethod
    def from_edges(cls, n: int, edge_array, labels: list[str] | None = None) -> "Graph":
        """Build a graph from an iterable/array of (u, v) pairs.

        Self-loops and duplicate edges are dropped silently; use
        :func:`load_edge_list` when drop counts matter.
        """
        e = np.asarray(list(edge_array) if not isinstance(edge_array, np.ndarray) else edge_array,
                       dtype=np.int64).reshape(-1, 2)
        if n < 1:
            raise ValueError("graph needs at least one node")
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise ValueError(f"edge endpoint out of range 0..{n - 1}")
            e = e[e[:, 0] != e[:, 1]]
        if e.size:
            lo = np.minimum(e[:, 0], e[:, 1])
            hi = np.maximum(e[:, 0], e[:, 1])
            key = np.unique(lo * np.int64(n) + hi)
            lo, hi = key // n, key % n
            src = np.concatenate([lo, hi])
            dst = np.concatenate([hi, lo])
            order = np.lexsort((dst, src))
            src, dst = src[order], dst[order]
        else:
            src = dst = np.empty(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst, labels)


def _tokens(line: str, delimiter: str | None) -> list[str]:
    # delimiter auto: whitespace, with commas treated as separators too
    if delimiter is not None:
        return [t for t in line.split(delimiter) if t.strip() != ""]
    return line.replace(",", " ").split()


def load_edge_list(source, delimiter: str | None = None, comment: str = "#") -> tuple[Graph, IngestReport]:
    """Parse an undirected edge list into a graph plus an ingestion report.

    ``source`` may be a path or an open text stream. Each non-comment,
    non-blank line must hold exactly two endpoint labels (arbitrary strings);
    labels are mapped to dense indices in first-seen order. Duplicate edges
    and self-loops are dropped and counted.

    Raises ValueError on a malformed line (with its line number) and on input
    containing no edges.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf8") as fh:
            return load_edge_list(fh, delimiter=delimiter, comment=comment)

    label_index: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    self_loops = 0

    def idx(tok: str) -> int:
        i = label_index.get(tok)
        if i is None:
            i = len(labels)
            label_index[tok] = i
            labels.append(tok)
        return i

    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith(comment):
            continue
        toks = _tokens(line, delimiter)
        if len(toks) != 2:
            raise ValueError(f"line {lineno}: expected two endpoint tokens, got {len(toks)}: {raw!r}")
        u, v = idx(toks[0]), idx(toks[1])
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        edges.append(key)

    if not edges:
        raise ValueError("empty edge list: no usable edges found")

    g = Graph.from_edges(len(labels), np.array(edges, dtype=np.int64), labels)
    report = IngestReport(g.num_nodes, g.num_edges, duplicates, self_loops)
    return g, report


def _expand_frontier(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """Concatenate the neighbor lists of every frontier node."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    ends = np.cumsum(counts)
    take = np.arange(total, dtype=np.int64) + np.repeat(starts - (ends - counts), counts)
    return indices[take]


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Exact hop distances from ``source``; UNREACHABLE (-1) in other components.

    Each call owns its private buffers, so concurrent BFS runs on one shared
    graph are safe.
    """
    n = g.num_nodes
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range 0..{n - 1}")
    dist = np.full(n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size:
        nbrs = _expand_frontier(g.indptr, g.indices, frontier)
        nbrs = nbrs[dist[nbrs] == UNREACHABLE]
        if nbrs.size == 0:
            break
        frontier = np.unique(nbrs)
        d += 1
        dist[frontier] = d
    return dist


def connected_components(g: Graph) -> ComponentMap:
    """Partition nodes into maximal connected sets (ids in discovery order)."""
    n = g.num_nodes
    ids = np.full(n, -1, dtype=np.int64)
    sizes: list[int] = []
    comp = 0
    for start in range(n):
        if ids[start] >= 0:
            continue
        ids[start] = comp
        frontier = np.array([start], dtype=np.int64)
        size = 1
        while frontier.size:
            nbrs = _expand_frontier(g.indptr, g.indices, frontier)
            nbrs = nbrs[ids[nbrs] < 0]
            if nbrs.size == 0:
                break
            frontier = np.unique(nbrs)
            ids[frontier] = comp
            size += frontier.size
        sizes.append(size)
        comp += 1
    return ComponentMap(ids, np.array(sizes, dtype=np.int64), comp)
