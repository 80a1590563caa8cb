import math

import numpy as np
import pytest

from detour import (
    Graph,
    ScoredPairs,
    adamic_adar_scores,
    common_neighbor_scores,
    detour_scores,
    distance_vectors,
    gen_er,
    metric_auc,
    metric_hits_at_k,
    metric_mrr,
    score_pairs,
    split_edges,
)
from oracles import brute_adamic_adar, brute_auc, brute_hits_at_k, brute_mrr, random_edges


def scored(pos, neg):
    pos, neg = np.asarray(pos, float), np.asarray(neg, float)
    k = len(pos) + len(neg)
    return ScoredPairs(
        np.zeros(k, dtype=np.int64),
        np.ones(k, dtype=np.int64),
        np.concatenate([pos, neg]),
        np.concatenate([np.ones(len(pos), bool), np.zeros(len(neg), bool)]),
    )


def test_split_exact_ratio_counts():
    # a deterministic 100-edge graph: 100-node cycle
    g = Graph.from_edges(100, [(i, (i + 1) % 100) for i in range(100)])
    assert g.num_edges == 100
    split = split_edges(g, (70, 10, 20), seed=1)
    assert len(split.train_pos) == 70
    assert len(split.valid_pos) == 10
    assert len(split.test_pos) == 20
    assert len(split.train_neg) == 70 and len(split.valid_neg) == 10 and len(split.test_neg) == 20


def test_split_disjoint_and_negative_purity():
    g = gen_er(40, 5.0, seed=3)
    split = split_edges(g, (70, 10, 20), seed=5)
    all_pos = np.concatenate([split.train_pos, split.valid_pos, split.test_pos])
    assert len(all_pos) == g.num_edges
    pos_keys = {tuple(e) for e in all_pos.tolist()}
    assert len(pos_keys) == g.num_edges  # splits are disjoint
    neg = np.concatenate([split.train_neg, split.valid_neg, split.test_neg])
    neg_keys = {tuple(e) for e in neg.tolist()}
    assert len(neg_keys) == len(neg)  # no duplicate negatives
    for u, v in neg_keys:
        assert not g.has_edge(u, v)
    # training graph = graph minus held-out positives
    assert split.train_graph.num_edges == len(split.train_pos)


def test_split_determinism():
    g = gen_er(50, 5.0, seed=2)
    a = split_edges(g, (70, 10, 20), seed=9)
    b = split_edges(g, (70, 10, 20), seed=9)
    assert np.array_equal(a.test_pos, b.test_pos)
    assert np.array_equal(a.test_neg, b.test_neg)


def test_split_rejects_bad_ratios_and_dense_graphs():
    g = gen_er(40, 5.0, seed=0)
    with pytest.raises(ValueError):
        split_edges(g, (50, 10, 20), seed=0)
    k5 = Graph.from_edges(5, [(a, b) for a in range(5) for b in range(a + 1, 5)])
    with pytest.raises(ValueError, match="dense"):
        split_edges(k5, (70, 10, 20), seed=0)


def test_adamic_adar_values():
    # one common neighbor of degree 2
    g = Graph.from_edges(3, [(0, 2), (1, 2)])
    assert adamic_adar_scores(g, [(0, 1)])[0] == pytest.approx(1 / math.log(2))
    # no common neighbors
    p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert adamic_adar_scores(p4, [(0, 3)])[0] == 0.0
    # complete graph on 4: pair (0,1) has common neighbors {2,3}, both degree 3
    k4 = Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert adamic_adar_scores(k4, [(0, 1)])[0] == pytest.approx(2 / math.log(3))


def test_adamic_adar_matches_set_oracle():
    rng = np.random.default_rng(8)
    for trial in range(10):
        n = int(rng.integers(5, 64))
        edges = random_edges(rng, n, 0.2)
        g = Graph.from_edges(n, edges)
        adj = [set(g.neighbors(v).tolist()) for v in range(n)]
        pairs = [(int(rng.integers(n)), int(rng.integers(n))) for _ in range(20)]
        pairs = [(u, v) for u, v in pairs if u != v]
        got = adamic_adar_scores(g, pairs)
        want = [brute_adamic_adar(adj, u, v) for u, v in pairs]
        assert np.allclose(got, want)


def test_common_neighbors_square():
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert common_neighbor_scores(c4, [(0, 2)])[0] == 2.0


def test_detour_scores_adjacent_landmark():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    prof = distance_vectors(g, [0])
    assert detour_scores(prof, [(0, 1)])[0] == -1.0
    # unreachable pairs score below any finite detour
    g2 = Graph.from_edges(4, [(0, 1), (2, 3)])
    prof2 = distance_vectors(g2, [0])
    assert detour_scores(prof2, [(2, 3)])[0] == -2.0 * prof2.sentinel


def test_detour_scores_monotone_in_detour():
    g = Graph.from_edges(7, [(i, i + 1) for i in range(6)])
    prof = distance_vectors(g, [3])
    s = detour_scores(prof, [(2, 4), (1, 5), (0, 6)])
    assert s[0] >= s[1] >= s[2]


def test_metrics_perfect_separation():
    sp = scored([3.0, 2.5, 2.0], [1.0, 0.5, 0.1])
    assert metric_auc(sp) == 1.0
    assert metric_hits_at_k(sp, 1) == 1.0
    assert metric_mrr(sp) == 1.0


def test_metrics_all_tied():
    sp = scored([1.0, 1.0], [1.0, 1.0, 1.0])
    assert metric_auc(sp) == 0.5
    assert metric_hits_at_k(sp, 1) == 0.0
    assert metric_mrr(sp) == pytest.approx(1 / 4)  # pessimistic: behind all 3 negatives


def test_metrics_worked_instance():
    sp = scored([0.9, 0.5, 0.2], [0.8, 0.4, 0.1])
    assert metric_hits_at_k(sp, 2) == pytest.approx(2 / 3)
    assert metric_auc(sp) == pytest.approx(6 / 9)  # brute force over the 9 pairs
    # pessimistic ranks 1, 2, 3 against the shared negative pool
    assert metric_mrr(sp) == pytest.approx((1 + 1 / 2 + 1 / 3) / 3)


def test_metric_errors():
    sp = scored([1.0], [0.5])
    with pytest.raises(ValueError):
        metric_hits_at_k(sp, 2)
    empty_neg = scored([1.0], [])
    with pytest.raises(ValueError, match="negative"):
        metric_auc(empty_neg)
    with pytest.raises(ValueError, match="no negatives"):
        metric_mrr(empty_neg)


def test_metrics_match_brute_force_oracles():
    rng = np.random.default_rng(12)
    for trial in range(200):
        n_pos = int(rng.integers(1, 10))
        n_neg = int(rng.integers(1, 10))
        # small integer scores make ties common
        pos = rng.integers(0, 4, size=n_pos).astype(float)
        neg = rng.integers(0, 4, size=n_neg).astype(float)
        sp = scored(pos, neg)
        assert metric_auc(sp) == pytest.approx(brute_auc(pos, neg), abs=1e-12)
        k = int(rng.integers(1, n_neg + 1))
        assert metric_hits_at_k(sp, k) == pytest.approx(brute_hits_at_k(pos, neg, k), abs=1e-12)
        npp = int(rng.integers(1, 12))
        assert metric_mrr(sp, npp) == pytest.approx(brute_mrr(pos, neg, npp), abs=1e-12)


def test_auc_invariant_under_monotone_transform():
    rng = np.random.default_rng(1)
    pos = rng.normal(size=20)
    neg = rng.normal(size=30)
    base = metric_auc(scored(pos, neg))
    assert metric_auc(scored(np.exp(pos), np.exp(neg))) == pytest.approx(base)
    assert metric_auc(scored(2 * pos + 1, 2 * neg + 1)) == pytest.approx(base)


def test_score_pairs_end_to_end():
    g = gen_er(60, 6.0, seed=4)
    split = split_edges(g, (70, 10, 20), seed=4)
    sp = score_pairs("aa", split.train_graph, split.test_pos, split.test_neg)
    assert sp.is_pos.sum() == len(split.test_pos)
    assert np.isfinite(sp.score).all()
    auc = metric_auc(sp)
    assert 0.0 <= auc <= 1.0
    csv = sp.to_csv()
    assert csv.splitlines()[0] == "u,v,score,label"
    with pytest.raises(ValueError):
        score_pairs("nope", split.train_graph, split.test_pos, split.test_neg)
