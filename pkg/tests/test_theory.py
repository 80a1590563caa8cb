import math

import numpy as np
import pytest

from detour import (
    EULER_GAMMA,
    GenSpec,
    Graph,
    ModelParams,
    ba_detour_bound,
    ba_mean_distance,
    ba_top_pool_bound,
    detour_ccdf,
    detour_mean_from_ccdf,
    er_detour_bound,
    er_mean_distance,
    gen_hidden,
    general_detour_bound,
    landmark_rank_experiment,
    run_detour_study,
    simulate_detour,
    top_pool_second_moment,
)
from detour.theory import degree_ranks, rank_table_csv, sim_report_csv


def test_er_bound_spot_values():
    assert er_detour_bound(1000, 10, 1) == pytest.approx(6.0, abs=1e-12)
    assert er_mean_distance(1000, 10) == pytest.approx(3.0, abs=1e-12)
    assert er_detour_bound(1000, 10, 32) == pytest.approx(4.4949, abs=1e-4)


def test_er_bound_sqrt_landmarks_factor():
    # K = n^(1-eps) makes the detour bound exactly (1+eps) times the mean distance
    n, eps = 10_000, 0.5
    k = round(n ** (1 - eps))
    assert er_detour_bound(n, 10, k) == pytest.approx((1 + eps) * er_mean_distance(n, 10), abs=1e-9)
    assert er_detour_bound(n, 7, k) == pytest.approx((1 + eps) * er_mean_distance(n, 7), abs=1e-9)


def test_ba_spot_values():
    assert ba_mean_distance(10_000) == pytest.approx(4.1480, abs=1e-3)
    assert ba_top_pool_bound(10_000, 10) == pytest.approx(5.7724, abs=1e-3)


def test_domain_errors():
    with pytest.raises(ValueError):
        er_detour_bound(1000, 1.0, 4)
    with pytest.raises(ValueError):
        er_mean_distance(1000, 0.5)
    with pytest.raises(ValueError):
        ba_mean_distance(15)
    with pytest.raises(ValueError):
        ba_detour_bound(1000, 2, 5)
    with pytest.raises(ValueError):
        ba_top_pool_bound(1000, 1)


def test_general_bound_specializes_to_er():
    # with constant h the general bound exceeds the ER form by the fixed offset
    # c(k) = (-ln k + ln ln k - gamma) / ln k + 1/2
    def c(k_avg):
        return (-math.log(k_avg) + math.log(math.log(k_avg)) - EULER_GAMMA) / math.log(k_avg) + 0.5

    assert c(10) == pytest.approx(-0.3885, abs=1e-4)
    for n in (100, 1000, 50_000):
        for k in (1, 4, 64):
            for k_avg in (3.0, 10.0, 25.0):
                got = general_detour_bound(ModelParams.er(n, k_avg, k))
                assert got - er_detour_bound(n, k_avg, k) == pytest.approx(c(k_avg), abs=1e-9)


def test_general_bound_regime_guard():
    with pytest.raises(ValueError, match="regime"):
        general_detour_bound(ModelParams(100, 2, h2=1.0, h2_q=1.0, beta=200.0, log_h_mean=0.0))


def test_bound_decreases_with_more_landmarks():
    vals = [er_detour_bound(5000, 8, k) for k in (1, 2, 8, 64, 512)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    p_few = ModelParams.er(5000, 8, 2)
    p_many = ModelParams.er(5000, 8, 50)
    assert general_detour_bound(p_many) < general_detour_bound(p_few)


def test_ccdf_anchors():
    params = ModelParams.er(1000, 10, 1)
    assert detour_ccdf(params, 10, 10, 1) == 1.0
    # direct evaluation of the closed form at s=2 for these parameters
    assert detour_ccdf(params, 10, 10, 2) == pytest.approx(math.exp(-1e-4), rel=1e-12)
    with pytest.raises(ValueError):
        detour_ccdf(params, 10, 10, 0)


def test_ccdf_monotone_and_underflow_safe():
    params = ModelParams.er(2000, 6, 4)
    vals = [detour_ccdf(params, 6, 6, s) for s in range(1, 40)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 0.0  # far tail underflows cleanly instead of overflowing


def test_ccdf_log_space_matches_plain_formula():
    params = ModelParams.er(500, 5, 3)
    for s in range(2, 8):
        plain = math.exp(
            -(25.0 / (params.beta * params.n * params.h2))
            * params.h2_q * params.landmark_count * (s - 1)
            * (params.h2 * params.n / params.beta) ** (s - 1)
        )
        assert detour_ccdf(params, 5, 5, s) == pytest.approx(plain, rel=1e-12)


def test_top_pool_second_moment():
    m_pool = math.log(5000) * 9
    assert top_pool_second_moment(5000, 9) == pytest.approx(math.log(m_pool) / m_pool, rel=1e-12)
    with pytest.raises(ValueError):
        top_pool_second_moment(2, 1)


def test_ba_top_pool_ratio_shrinks_toward_one():
    ratios = []
    for n in (10**3, 10**4, 10**5, 10**6):
        k = math.ceil(math.log(n))
        ratios.append(ba_top_pool_bound(n, k) / ba_mean_distance(n))
    assert all(r > 1 for r in ratios)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_tail_sum_matches_empirical_detour_mean():
    # matched parameters, frozen after an oracle scan: constant h = 3 on
    # n = 5000 nodes with beta = h * n reproduces a mean-degree-3 graph
    n, k_avg, k = 5000, 3.0, 5
    means = []
    for seed in range(3):
        g = gen_hidden(np.full(n, k_avg), k_avg * n, seed=seed)
        rec = simulate_detour(g, strategy="uniform", landmark_count=k, pair_samples=300, seed=seed)
        means.append(rec.mean_detour)
    empirical = float(np.mean(means))
    predicted = detour_mean_from_ccdf(ModelParams.er(n, k_avg, k), k_avg, k_avg)
    assert abs(empirical - predicted) / empirical < 0.20


def test_tail_sum_divergence_guard():
    with pytest.raises(ValueError):
        detour_mean_from_ccdf(ModelParams(100, 2, h2=1.0, h2_q=1.0, beta=200.0, log_h_mean=0.0), 1, 1)


def test_simulate_complete_graph():
    n = 50
    g = Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])
    rec = simulate_detour(g, strategy="uniform", landmark_count=3, pair_samples=200, seed=0)
    assert rec.mean_true == 1.0
    assert rec.mean_detour == 2.0  # every detour passes through a third node
    assert rec.ccdf[0] == 1.0  # P(L > 1) anchors at one
    assert (np.diff(rec.ccdf) <= 0).all()


def test_simulate_star_center_landmark():
    g = Graph.from_edges(100, [(0, i) for i in range(1, 100)])
    rec = simulate_detour(g, strategy="top_degree", landmark_count=1, pair_samples=150, seed=1)
    assert rec.mean_detour == rec.mean_true == 2.0  # hub sits on every shortest path


def test_simulate_detour_dominates_truth():
    for seed in range(4):
        g = GenSpec("er", 400, k_avg=5.0).generate(seed=seed)
        rec = simulate_detour(g, strategy="uniform", landmark_count=6, pair_samples=120, seed=seed)
        assert rec.mean_detour >= rec.mean_true
        assert not rec.with_replacement


def test_simulate_with_replacement_flag():
    g = Graph.from_edges(6, [(i, i + 1) for i in range(5)])
    rec = simulate_detour(g, strategy="uniform", landmark_count=1, pair_samples=50, seed=0)
    assert rec.with_replacement


def test_simulate_cluster_strategy_and_determinism():
    g = GenSpec("ba", 300, m=3).generate(seed=2)
    a = simulate_detour(g, strategy="cluster", landmark_count=6, pair_samples=80, seed=3)
    b = simulate_detour(g, strategy="cluster", landmark_count=6, pair_samples=80, seed=3)
    assert a.mean_detour == b.mean_detour and a.mean_true == b.mean_true
    assert a.landmark_count == 6


def test_run_detour_study_er_bound_holds():
    report = run_detour_study(
        GenSpec("er", 600, k_avg=6.0), strategy="uniform", k_spec="logn",
        pair_samples=150, num_seeds=2, root_seed=0,
    )
    assert len(report.records) == 2
    assert report.config["landmark_count"] == math.ceil(math.log(600))
    assert report.summary["mean_detour"] <= report.summary["bound"]
    again = run_detour_study(
        GenSpec("er", 600, k_avg=6.0), strategy="uniform", k_spec="logn",
        pair_samples=150, num_seeds=2, root_seed=0,
    )
    assert report.summary == again.summary


def test_sim_report_csv_shape():
    report = run_detour_study(
        GenSpec("er", 300, k_avg=5.0), strategy="uniform", k_spec=4,
        pair_samples=60, num_seeds=2, root_seed=1,
    )
    lines = sim_report_csv(report).strip().splitlines()
    assert lines[0].startswith("row,model,n,")
    assert len(lines) == 4  # header + 2 seeds + summary
    assert lines[-1].startswith("summary,er,300,uniform,4")


def test_degree_ranks_competition_ties():
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2)])
    # degrees: 3, 2, 2, 1, 0 -> ranks: 1, 2, 2, 4, 5
    assert degree_ranks(g, [0, 1, 2, 3, 4]).tolist() == [1, 2, 2, 4, 5]


def test_rank_experiment_small():
    rows = landmark_rank_experiment([500], m=5, eta=1, num_seeds=2, root_seed=0)
    (row,) = rows
    assert row.n == 500 and row.landmark_count == 7
    assert row.threshold_rank == math.ceil(math.log(500) ** 2) == 39
    assert row.fraction_within >= 0.9
    assert 0 < row.mean_rank_pct <= row.worst_rank_pct
    csv = rank_table_csv(rows)
    assert csv.splitlines()[0].startswith("n,landmark_count,threshold_rank")
