"""Fluid-communities clustering and the two-level cluster hierarchy.

The update rule moves node u to the candidate community maximizing
``|({u} union N(u)) intersect C| / |C|``: the numerator favors communities
already holding many of u's neighbors, the denominator favors small
communities, which together yield dense clusters of even size. Candidates are
only u's current community and the communities of u's neighbors, so one pass
costs O(|E|) candidate evaluations.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, connected_components
from .util import as_rng, atomic_write_text

MACRO_CAP = 15  # upper bound on the number of macro-clusters


@dataclass(frozen=True)
class Partition:
    """Node -> cluster assignment, optionally with a macro-cluster level.

    Cluster ids are dense 0..k-1 and every cluster is non-empty. When the
    macro level is present, ``macro_of_cluster[c]`` gives the macro-cluster id
    of cluster c; clusters of one macro-cluster have contiguous ids.
    """

    cluster_of: np.ndarray
    k: int
    macro_of_cluster: np.ndarray | None = None
    r: int | None = None
    converged: bool = True
    k_requested: int | None = None  # set when the effective k drifted from the request
    stats: dict = field(default_factory=dict)

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.cluster_of, minlength=self.k)

    def macro_of_node(self) -> np.ndarray:
        if self.macro_of_cluster is None:
            raise ValueError("partition has no macro-cluster level")
        return self.macro_of_cluster[self.cluster_of]

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.cluster_of == cluster)

    def validate(self) -> None:
        """Raise if the partition is not a proper cover with non-empty clusters."""
        if len(self.cluster_of) and (self.cluster_of.min() < 0 or self.cluster_of.max() >= self.k):
            raise ValueError("cluster ids out of range")
        sizes = self.cluster_sizes()
        if (sizes == 0).any():
            raise ValueError("empty cluster present")
        if self.macro_of_cluster is not None:
            if len(self.macro_of_cluster) != self.k:
                raise ValueError("macro map length != k")
            if self.r is None or np.bincount(self.macro_of_cluster, minlength=self.r).min() == 0:
                raise ValueError("empty macro-cluster present")

    def to_csv(self, path_or_buf) -> None:
        """Write ``node,cluster,macro_cluster`` rows (macro column empty if absent)."""
        macro = self.macro_of_node() if self.macro_of_cluster is not None else None
        buf = io.StringIO()
        buf.write("node,cluster,macro_cluster\n")
        for v in range(len(self.cluster_of)):
            m = "" if macro is None else str(int(macro[v]))
            buf.write(f"{v},{int(self.cluster_of[v])},{m}\n")
        if isinstance(path_or_buf, (str, os.PathLike)):
            atomic_write_text(path_or_buf, buf.getvalue())
        else:
            path_or_buf.write(buf.getvalue())


def fluidc(g: Graph, k: int, seed=0, max_iters: int = 100) -> Partition:
    """Fluid-communities partition of a connected graph into exactly k clusters.

    Fully deterministic given the seed: k random starting nodes become
    single-member communities, then nodes are visited in a reshuffled order
    each pass and reassigned by the density rule until a full pass makes no
    change (or ``max_iters`` passes ran; see ``Partition.converged``).

    Ties keep the current community when it attains the maximum, otherwise one
    maximizer is drawn uniformly. A move that would empty a community is
    forbidden so all k communities stay non-empty.
    """
    n = g.num_nodes
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be within 1..{n}")
    if connected_components(g).count != 1:
        raise ValueError("fluidc requires a connected graph; use fluidc_multi")
    rng = as_rng(seed)

    cluster = np.full(n, -1, dtype=np.int64)
    sizes = np.zeros(k, dtype=np.int64)
    starts = rng.choice(n, size=k, replace=False)
    cluster[starts] = np.arange(k, dtype=np.int64)
    sizes[:] = 1

    indptr, indices = g.indptr, g.indices
    evaluations = 0
    converged = False
    passes = 0
    for _ in range(max_iters):
        passes += 1
        moved = 0
        for u in rng.permutation(n):
            nb = indices[indptr[u] : indptr[u + 1]]
            cl = cluster[nb]
            cl = cl[cl >= 0]
            cu = int(cluster[u])
            if cu >= 0:
                cl = np.concatenate([cl, [cu]])
            if cl.size == 0:
                continue
            cand, cnt = np.unique(cl, return_counts=True)
            evaluations += cand.size
            score = cnt / sizes[cand]
            best = cand[score == score.max()]
            if cu >= 0 and (best == cu).any():
                continue
            if cu >= 0 and sizes[cu] == 1:
                continue  # move would empty the community
            new = int(best[0]) if best.size == 1 else int(best[rng.integers(best.size)])
            if cu >= 0:
                sizes[cu] -= 1
            sizes[new] += 1
            cluster[u] = new
            moved += 1
        if moved == 0:
            converged = True
            break

    # max_iters can strand nodes far from every start on high-diameter graphs;
    # keep applying the same rule to unassigned nodes until the cover is total
    while True:
        pending = np.flatnonzero(cluster < 0)
        if pending.size == 0:
            break
        for u in pending:
            cl = cluster[indices[indptr[u] : indptr[u + 1]]]
            cl = cl[cl >= 0]
            if cl.size == 0:
                continue
            cand, cnt = np.unique(cl, return_counts=True)
            score = cnt / sizes[cand]
            best = cand[score == score.max()]
            new = int(best[0]) if best.size == 1 else int(best[rng.integers(best.size)])
            sizes[new] += 1
            cluster[u] = new

    return Partition(
        cluster,
        k,
        converged=converged,
        stats={"passes": passes, "candidate_evaluations": evaluations},
    )


def _allocate_clusters(sizes: np.ndarray, k: int) -> np.ndarray:
    """Split k clusters across components proportionally to component size.

    Every component gets at least one cluster and at most ``size`` clusters;
    overshoot from the minimums is trimmed from the largest components.
    """
    c = len(sizes)
    n = int(sizes.sum())
    if k < c or k > n:
        raise ValueError(f"cannot allocate {k} clusters over {c} components with {n} nodes")
    quota = k * sizes / n
    alloc = np.floor(quota).astype(np.int64)
    alloc = np.clip(alloc, 1, sizes)
    while alloc.sum() < k:
        room = np.flatnonzero(alloc < sizes)
        shortfall = quota[room] - alloc[room]
        alloc[room[int(np.argmax(shortfall))]] += 1
    while alloc.sum() > k:
        trimmable = np.flatnonzero(alloc > 1)
        alloc[trimmable[int(np.argmax(sizes[trimmable]))]] -= 1
    return alloc


def fluidc_multi(g: Graph, k: int, seed=0, max_iters: int = 100) -> Partition:
    """Fluid communities on a possibly disconnected graph.

    Clusters are allocated to components proportionally to size (each
    component at least one) and fluidc runs per component. If the graph has
    more components than k, the effective k is raised to the component count
    and ``k_requested`` records the original request.
    """
    n = g.num_nodes
    comp = connected_components(g)
    k_requested = None
    if comp.count > k:
        k_requested = k
        k = comp.count
    if k > n:
        raise ValueError(f"k={k} exceeds node count {n}")

    alloc = _allocate_clusters(comp.sizes, k)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = ss.spawn(comp.count)

    cluster = np.full(n, -1, dtype=np.int64)
    offset = 0
    converged = True
    passes = 0
    evaluations = 0
    for c in range(comp.count):
        nodes = comp.nodes_of(c)
        part = fluidc(g.subgraph(nodes), int(alloc[c]), seed=children[c], max_iters=max_iters)
        cluster[nodes] = offset + part.cluster_of
        offset += part.k
        converged &= part.converged
        passes = max(passes, part.stats["passes"])
        evaluations += part.stats["candidate_evaluations"]

    return Partition(
        cluster,
        k,
        converged=converged,
        k_requested=k_requested,
        stats={"passes": passes, "candidate_evaluations": evaluations, "components": comp.count},
    )


def cluster_plan(n: int, eta: int) -> tuple[int, int, int]:
    """Resolve (k_base, r, k) for a graph of n nodes at multiplier ``eta``.

    k_base = ceil(eta * ln n) clusters; r = min(15, floor(k_base / eta))
    macro-clusters; k is k_base rounded up to the next multiple of r so every
    macro-cluster holds exactly k / r clusters.
    """
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if eta < 1:
        raise ValueError("eta must be a positive integer")
    k_base = math.ceil(eta * math.log(n))
    r = max(1, min(MACRO_CAP, k_base // eta))
    k = -(-k_base // r) * r
    return k_base, r, k


def hierarchical_partition(g: Graph, eta: int = 5, seed=0, max_iters: int = 100) -> Partition:
    """Two-level partition: r macro-clusters, each split into k/r clusters.

    The graph is first partitioned into r macro-clusters, then each
    macro-cluster is partitioned independently, which is simpler than grouping
    k small clusters back into macro-clusters. Counts follow
    :func:`cluster_plan`; disconnected inputs are handled by fluidc_multi at
    both levels. The effective counts can drift from the plan (component-heavy
    graphs raise them, macro-clusters smaller than k/r lower them); any drift
    is recorded in ``k_requested``.
    """
    n = g.num_nodes
    k_base, r, k = cluster_plan(n, eta)
    per_macro = k // r

    ss = np.random.SeedSequence(seed) if not isinstance(seed, np.random.SeedSequence) else seed
    children = ss.spawn(r + 1)
    macro_part = fluidc_multi(g, r, seed=children[0], max_iters=max_iters)
    r_eff = macro_part.k
    if r_eff > r:
        children = ss.spawn(r_eff + 1)

    cluster = np.full(n, -1, dtype=np.int64)
    macro_of_cluster: list[int] = []
    offset = 0
    converged = macro_part.converged
    adjusted = macro_part.k_requested is not None
    for i in range(r_eff):
        nodes = macro_part.members(i)
        want = min(per_macro, len(nodes))
        adjusted |= want < per_macro
        if want == 1:
            # degenerate level: the macro-cluster is the cluster (a macro may be
            # internally disconnected, which a trivial partition tolerates)
            cluster[nodes] = offset
            macro_of_cluster.append(i)
            offset += 1
            continue
        sub = fluidc_multi(g.subgraph(nodes), want, seed=children[i + 1], max_iters=max_iters)
        cluster[nodes] = offset + sub.cluster_of
        macro_of_cluster.extend([i] * sub.k)
        offset += sub.k
        converged &= sub.converged
        adjusted |= sub.k_requested is not None

    return Partition(
        cluster,
        offset,
        macro_of_cluster=np.array(macro_of_cluster, dtype=np.int64),
        r=r_eff,
        converged=converged,
        k_requested=k if adjusted or offset != k else None,
        stats={"eta": eta, "k_base": k_base, "k_rounded": k, "r_planned": r},
    )
