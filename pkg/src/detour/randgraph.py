"""Random graph generators: Erdos-Renyi, Barabasi-Albert, hidden-variable.

All generators are pure functions of (parameters, seed). The hidden-variable
class connects pair (i, j) with probability min(1, h_i * h_j / beta); constant
h with beta = h * n reproduces Erdos-Renyi, and drawing h from the power-law
density (2/n) h^{-3} on [1/sqrt(n), 1] with beta = 2/m mirrors the
Barabasi-Albert edge probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .util import as_rng


def gen_er(n: int, k_avg: float, seed=0) -> Graph:
    """Erdos-Renyi graph: every unordered pair kept with probability k_avg / n.

    Pairs are scanned by geometric gap-skipping over the linear pair index, so
    the cost is proportional to the number of edges drawn.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if not 0 < k_avg < n:
        raise ValueError(f"mean degree must satisfy 0 < k_avg < n, got {k_avg}")
    p = k_avg / n
    rng = as_rng(seed)
    total_pairs = n * (n - 1) // 2

    positions: list[np.ndarray] = []
    pos = -1
    batch = max(256, int(total_pairs * p * 1.2))
    while True:
        gaps = rng.geometric(p, size=batch)
        cum = pos + np.cumsum(gaps)
        inside = cum < total_pairs
        positions.append(cum[inside])
        if not inside.all():
            break
        pos = int(cum[-1])
    hits = np.concatenate(positions) if positions else np.empty(0, dtype=np.int64)

    # decode linear index over pairs (i < j), row-major in i
    row_offsets = np.arange(n, dtype=np.int64) * n - (np.arange(n, dtype=np.int64) * (np.arange(n, dtype=np.int64) + 1)) // 2
    i = np.searchsorted(row_offsets, hits, side="right") - 1
    j = hits - row_offsets[i] + i + 1
    return Graph.from_edges(n, np.column_stack([i, j]))


def gen_ba(n: int, m: int, seed=0) -> Graph:
    """Barabasi-Albert preferential attachment graph.

    Starts from a complete graph on m nodes; each arriving node attaches m
    edges, targets drawn from the repeated-endpoint list (degree-proportional)
    with duplicate targets rejected. Final edge count is C(m,2) + m(n-m).
    """
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = as_rng(seed)
    edges: list[tuple[int, int]] = []
    endpoints: list[int] = []
    for a in range(m):
        for b in range(a + 1, m):
            edges.append((a, b))
            endpoints.extend((a, b))
    for v in range(m, n):
        if endpoints:
            targets: set[int] = set()
            while len(targets) < m:
                targets.add(endpoints[int(rng.integers(len(endpoints)))])
        else:
            # m = 1 starts from an edgeless single node; attach uniformly
            targets = {int(rng.integers(v))}
        for t in sorted(targets):
            edges.append((v, t))
            endpoints.extend((v, t))
    return Graph.from_edges(n, np.array(edges, dtype=np.int64))


def gen_hidden(h, beta: float, seed=0) -> Graph:
    """Hidden-variable graph: pair (i, j) kept with probability min(1, h_i h_j / beta)."""
    h = np.asarray(h, dtype=np.float64)
    n = len(h)
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if (h <= 0).any():
        raise ValueError("hidden variables must be positive")
    if beta <= 0:
        raise ValueError("beta must be positive")
    rng = as_rng(seed)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    for i in range(n - 1):
        p_row = np.minimum(h[i] * h[i + 1 :] / beta, 1.0)
        draw = rng.random(n - 1 - i)
        hit = np.flatnonzero(draw < p_row)
        if hit.size:
            rows.append(np.full(hit.size, i, dtype=np.int64))
            cols.append(hit + i + 1)
    if rows:
        edges = np.column_stack([np.concatenate(rows), np.concatenate(cols)])
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return Graph.from_edges(n, edges)


def sample_power_hidden(n: int, size: int | None = None, seed=0) -> np.ndarray:
    """Draw hidden variables from the density (2/n) h^{-3} on [1/sqrt(n), 1].

    Inverse-CDF sampling of the normalized truncation, so the second moment is
    (ln n / n) / (1 - 1/n), approaching ln n / n for large n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = as_rng(seed)
    size = n if size is None else size
    u = rng.random(size)
    return 1.0 / np.sqrt(n * (1.0 - u * (1.0 - 1.0 / n)))


@dataclass(frozen=True)
class GenSpec:
    """Declarative generator configuration used by the command-line surface.

    model "er" needs k_avg; "ba" needs m; "hidden" needs either h_const with
    beta, or h_source="power" with m (beta defaults to 2/m).
    """

    model: str
    n: int
    k_avg: float | None = None
    m: int | None = None
    h_source: str = "power"
    h_const: float | None = None
    beta: float | None = None

    def validate(self) -> None:
        if self.model not in ("er", "ba", "hidden"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.model == "er":
            if self.k_avg is None:
                raise ValueError("er model needs k_avg")
            if not 0 < self.k_avg < self.n:
                raise ValueError("er model needs 0 < k_avg < n")
        if self.model == "ba":
            if self.m is None or not 1 <= self.m < self.n:
                raise ValueError("ba model needs 1 <= m < n")
        if self.model == "hidden":
            if self.h_const is not None:
                if self.beta is None:
                    raise ValueError("hidden model with constant h needs beta")
            elif self.h_source == "power":
                if self.m is None and self.beta is None:
                    raise ValueError("hidden model needs m (for beta = 2/m) or beta")
            else:
                raise ValueError(f"unknown h_source {self.h_source!r}")

    def effective_beta(self) -> float:
        if self.beta is not None:
            return float(self.beta)
        return 2.0 / float(self.m)

    def generate(self, seed=0) -> Graph:
        self.validate()
        if self.model == "er":
            return gen_er(self.n, self.k_avg, seed)
        if self.model == "ba":
            return gen_ba(self.n, self.m, seed)
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        h_seed, edge_seed = ss.spawn(2)
        if self.h_const is not None:
            h = np.full(self.n, float(self.h_const))
        else:
            h = sample_power_hidden(self.n, seed=h_seed)
        return gen_hidden(h, self.effective_beta(), edge_seed)
