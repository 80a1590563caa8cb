"""Edge splitting, negative sampling, heuristic scorers, and ranking metrics.

Scores only need to rank: AUC is the probability a positive outscores a
negative (ties count half), hits@k is the fraction of positives strictly
above the k-th highest negative score, and MRR ranks each positive
pessimistically among its assigned negatives (placed after equal scores).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .landmarks import LandmarkProfile, min_detour_many
from .util import as_rng


@dataclass(frozen=True)
class EvalSplit:
    """Train/valid/test positive edges with per-split sampled negatives.

    Positives partition the full edge set; negatives are true non-edges of
    the full graph, sampled without duplicates and disjoint across splits,
    one negative per positive. ``train_graph`` is the graph minus valid and
    test positives.
    """

    train_pos: np.ndarray
    valid_pos: np.ndarray
    test_pos: np.ndarray
    train_neg: np.ndarray
    valid_neg: np.ndarray
    test_neg: np.ndarray
    ratios: tuple[int, int, int]
    seed: int
    train_graph: Graph


@dataclass(frozen=True)
class ScoredPairs:
    """Scored node pairs with positive/negative labels."""

    u: np.ndarray
    v: np.ndarray
    score: np.ndarray
    is_pos: np.ndarray

    def pos_scores(self) -> np.ndarray:
        return self.score[self.is_pos]

    def neg_scores(self) -> np.ndarray:
        return self.score[~self.is_pos]

    def to_csv(self) -> str:
        lines = ["u,v,score,label"]
        for u, v, s, p in zip(self.u, self.v, self.score, self.is_pos):
            lines.append(f"{u},{v},{s!r},{'pos' if p else 'neg'}")
        return "\n".join(lines) + "\n"


def split_edges(g: Graph, ratios: tuple[int, int, int] = (70, 10, 20), seed: int = 0) -> EvalSplit:
    """Random train/valid/test edge split with 1:1 uniform negative sampling.

    Ratios are percentages summing to 100; rounding leftovers go to train.
    Raises when the graph is too dense to supply enough distinct non-edges.
    """
    if len(ratios) != 3 or sum(ratios) != 100 or min(ratios) < 0:
        raise ValueError("ratios must be three non-negative percentages summing to 100")
    rng = as_rng(seed)
    edges = g.edges()
    m = len(edges)
    if m < 3:
        raise ValueError("graph too small to split")
    perm = rng.permutation(m)
    n_valid = m * ratios[1] // 100
    n_test = m * ratios[2] // 100
    test_pos = edges[perm[:n_test]]
    valid_pos = edges[perm[n_test : n_test + n_valid]]
    train_pos = edges[perm[n_test + n_valid :]]

    n = g.num_nodes
    available = n * (n - 1) // 2 - m
    if m > available:
        raise ValueError(
            f"graph too dense to sample {m} distinct negatives ({available} non-edges exist)"
        )
    negatives = _sample_non_edges(g, m, rng)
    train_neg = negatives[: len(train_pos)]
    valid_neg = negatives[len(train_pos) : len(train_pos) + len(valid_pos)]
    test_neg = negatives[len(train_pos) + len(valid_pos) :]

    train_graph = Graph.from_edges(n, train_pos, labels=g.labels)
    return EvalSplit(
        train_pos, valid_pos, test_pos, train_neg, valid_neg, test_neg,
        tuple(ratios), seed if isinstance(seed, int) else -1, train_graph,
    )


def _sample_non_edges(g: Graph, count: int, rng) -> np.ndarray:
    """Uniform distinct non-edges. Enumerates exhaustively when the pool is tight."""
    n = g.num_nodes
    total = n * (n - 1) // 2
    available = total - g.num_edges
    if count > available:
        raise ValueError(f"cannot sample {count} non-edges, only {available} exist")
    if available <= 4 * count or n <= 64:
        # tight pool: enumerate all non-edges and choose directly
        pair_u, pair_v = np.triu_indices(n, 1)
        present = np.zeros(len(pair_u), dtype=bool)
        key = pair_u * np.int64(n) + pair_v  # ascending by construction
        edges = g.edges()
        edge_key = edges[:, 0] * np.int64(n) + edges[:, 1]
        present[np.searchsorted(key, edge_key)] = True
        pool = np.flatnonzero(~present)
        pick = rng.choice(len(pool), size=count, replace=False)
        sel = pool[np.sort(pick)]
        return np.column_stack([pair_u[sel], pair_v[sel]])
    out = np.empty((count, 2), dtype=np.int64)
    seen: set[tuple[int, int]] = set()
    filled = 0
    while filled < count:
        a, b = rng.integers(n, size=2)
        if a == b:
            continue
        u, v = (int(a), int(b)) if a < b else (int(b), int(a))
        if (u, v) in seen or g.has_edge(u, v):
            continue
        seen.add((u, v))
        out[filled] = (u, v)
        filled += 1
    return out


# ---------------------------------------------------------------------------
# scorers


def adamic_adar_scores(g: Graph, pairs) -> np.ndarray:
    """Sum of 1/ln(degree) over common neighbors (0 with no common neighbor).

    A common neighbor always has degree >= 2, so the logarithm is positive.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    deg = g.degrees()
    out = np.zeros(len(pairs), dtype=np.float64)
    for i, (u, v) in enumerate(pairs):
        common = np.intersect1d(g.neighbors(int(u)), g.neighbors(int(v)), assume_unique=True)
        if common.size:
            out[i] = float(np.sum(1.0 / np.log(deg[common])))
    return out


def common_neighbor_scores(g: Graph, pairs) -> np.ndarray:
    """Count of common neighbors."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    out = np.zeros(len(pairs), dtype=np.float64)
    for i, (u, v) in enumerate(pairs):
        out[i] = np.intersect1d(g.neighbors(int(u)), g.neighbors(int(v)), assume_unique=True).size
    return out


def detour_scores(profile: LandmarkProfile, pairs) -> np.ndarray:
    """Negated detour distance (closer pairs score higher).

    Pairs with no common reachable landmark score -(2 * sentinel), below any
    finite detour. The profile must be built on the training graph only.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    detours = min_detour_many(profile, pairs[:, 0], pairs[:, 1]).astype(np.float64)
    detours[detours < 0] = 2.0 * profile.sentinel
    return -detours


SCORERS = ("aa", "cn", "detour")


def score_pairs(scorer: str, model, pos_pairs, neg_pairs) -> ScoredPairs:
    """Score labelled positive/negative pairs with one of the heuristic scorers.

    ``model`` is the training graph for "aa"/"cn" and a LandmarkProfile for
    "detour".
    """
    if scorer == "aa":
        fn = lambda pairs: adamic_adar_scores(model, pairs)  # noqa: E731
    elif scorer == "cn":
        fn = lambda pairs: common_neighbor_scores(model, pairs)  # noqa: E731
    elif scorer == "detour":
        fn = lambda pairs: detour_scores(model, pairs)  # noqa: E731
    else:
        raise ValueError(f"unknown scorer {scorer!r}")
    pos = np.asarray(pos_pairs, dtype=np.int64).reshape(-1, 2)
    neg = np.asarray(neg_pairs, dtype=np.int64).reshape(-1, 2)
    u = np.concatenate([pos[:, 0], neg[:, 0]])
    v = np.concatenate([pos[:, 1], neg[:, 1]])
    score = np.concatenate([fn(pos), fn(neg)])
    is_pos = np.zeros(len(u), dtype=bool)
    is_pos[: len(pos)] = True
    return ScoredPairs(u, v, score, is_pos)


# ---------------------------------------------------------------------------
# metrics


def metric_auc(sp: ScoredPairs) -> float:
    """P(score_pos > score_neg) over all positive-negative pairs, ties half."""
    pos = sp.pos_scores()
    neg = np.sort(sp.neg_scores())
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("need both positive and negative scores")
    lo = np.searchsorted(neg, pos, side="left")
    hi = np.searchsorted(neg, pos, side="right")
    wins = lo + 0.5 * (hi - lo)  # strict wins plus half-credit ties, all exact
    return math.fsum(wins) / (len(pos) * len(neg))


def metric_hits_at_k(sp: ScoredPairs, k: int) -> float:
    """Fraction of positives scored strictly above the k-th highest negative."""
    pos = sp.pos_scores()
    neg = sp.neg_scores()
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("need both positive and negative scores")
    if k < 1 or k > len(neg):
        raise ValueError(f"hits@k needs 1 <= k <= {len(neg)} negatives, got k={k}")
    threshold = np.sort(neg)[-k]
    return float((pos > threshold).mean())


def metric_mrr(sp: ScoredPairs, negatives_per_positive: int = 1000) -> float:
    """Mean reciprocal pessimistic rank of each positive among its negatives.

    Every positive is ranked against the same shared pool: the first
    ``negatives_per_positive`` negatives in emission order (capped by
    availability). The pessimistic rank places a positive after every
    equal-scored negative.
    """
    pos = sp.pos_scores()
    neg = sp.neg_scores()
    if len(pos) == 0:
        raise ValueError("need positive scores")
    if len(neg) == 0:
        raise ValueError("no negatives assigned for MRR")
    if negatives_per_positive < 1:
        raise ValueError("negatives_per_positive must be positive")
    pool = np.sort(neg[: min(negatives_per_positive, len(neg))])
    # rank = 1 + count(pool >= pos); fsum keeps the mean independent of order
    not_below = len(pool) - np.searchsorted(pool, pos, side="left")
    return math.fsum(1.0 / (1.0 + not_below)) / len(pos)
