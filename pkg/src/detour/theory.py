"""Closed-form detour-distance bounds and the simulation lab that checks them.

Model: edges exist independently with probability h_i * h_j / beta for
per-node hidden variables h. For a pair (i, j) and K landmarks drawn i.i.d.
from a distribution with second moment ``h2_q``, the length L of the shortest
detour via a landmark satisfies, asymptotically in n,

    P(L > s) = exp[-(h_i h_j / (beta n <h^2>)) * h2_q * K * (s-1)
                    * (<h^2> n / beta)^(s-1)]

and the mean shortest-detour length is bounded by a closed form in the model
moments. Specializations cover Erdos-Renyi (h constant) and Barabasi-Albert
(h power-law distributed) graphs; all logarithms are natural.

The simulation half measures true shortest-path and detour distances on
generated graphs under several landmark-selection strategies and reports them
next to the matching closed-form bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import fluidc_multi
from .graph import Graph, bfs_distances, connected_components
from .landmarks import distance_vectors, min_detour_many, select_landmarks
from .randgraph import GenSpec
from .util import as_rng, atomic_write_text, derive_seed, fmt_real

EULER_GAMMA = 0.5772156649

SIM_REPORT_VERSION = 1

STRATEGIES = ("uniform", "top_degree", "cluster")


@dataclass(frozen=True)
class ModelParams:
    """Moments of a hidden-variable random-graph model plus landmark choices.

    ``h2`` is the second moment of h over all nodes, ``h2_q`` the second
    moment under the landmark-selection distribution, ``log_h_mean`` the mean
    of ln h over all nodes.
    """

    n: int
    landmark_count: int
    h2: float
    h2_q: float
    beta: float
    log_h_mean: float

    def __post_init__(self):
        if self.n < 2 or self.landmark_count < 1:
            raise ValueError("need n >= 2 and at least one landmark")
        if min(self.h2, self.h2_q, self.beta) <= 0:
            raise ValueError("moments and beta must be positive")

    @classmethod
    def er(cls, n: int, k_avg: float, landmark_count: int) -> "ModelParams":
        """Erdos-Renyi: constant h = k_avg, beta = k_avg * n."""
        if k_avg <= 0:
            raise ValueError("k_avg must be positive")
        return cls(n, landmark_count, k_avg**2, k_avg**2, k_avg * n, math.log(k_avg))

    @classmethod
    def ba(cls, n: int, m: int, landmark_count: int, top_pool: bool = False) -> "ModelParams":
        """Barabasi-Albert: h power-law on [1/sqrt(n), 1], beta = 2/m.

        Moments under that density: <h^2> = ln(n)/n and
        <ln h> = 1/2 - ln(n)/2 - 1/(2n). With ``top_pool`` the landmark
        distribution is uniform over the top ln(n)*K hidden values, whose
        second moment is ln(M)/M for M = ln(n)*K.
        """
        if m < 1:
            raise ValueError("m must be positive")
        h2 = math.log(n) / n
        log_h = 0.5 - math.log(n) / 2.0 - 1.0 / (2.0 * n)
        h2_q = top_pool_second_moment(n, landmark_count) if top_pool else h2
        return cls(n, landmark_count, h2, h2_q, 2.0 / m, log_h)


def top_pool_second_moment(n: int, landmark_count: int) -> float:
    """Second moment ln(M)/M of hidden values in the top-(ln n * K) pool."""
    m_pool = math.log(n) * landmark_count
    if m_pool <= 1:
        raise ValueError("top pool must hold more than one node")
    return math.log(m_pool) / m_pool


def detour_ccdf(params: ModelParams, h_i: float, h_j: float, s: int) -> float:
    """P(shortest detour via the landmarks is longer than s), s = 1, 2, ...

    Computed in log space: the exponent magnitude is
    exp(ln h_i + ln h_j - ln beta - ln n - ln h2 + ln h2_q + ln K + ln(s-1)
        + (s-1)(ln h2 + ln n - ln beta)),
    so huge s never overflows; the probability just underflows to 0.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    if min(h_i, h_j) <= 0:
        raise ValueError("hidden variables must be positive")
    if s == 1:
        return 1.0
    log_mag = (
        math.log(h_i)
        + math.log(h_j)
        - math.log(params.beta)
        - math.log(params.n)
        - math.log(params.h2)
        + math.log(params.h2_q)
        + math.log(params.landmark_count)
        + math.log(s - 1)
        + (s - 1) * (math.log(params.h2) + math.log(params.n) - math.log(params.beta))
    )
    if log_mag > 700.0:
        return 0.0
    return math.exp(-math.exp(log_mag))


def detour_mean_from_ccdf(params: ModelParams, h_i: float, h_j: float,
                          tol: float = 1e-12, max_terms: int = 100_000) -> float:
    """Mean shortest-detour length as the tail sum over s >= 1 of P(L > s)."""
    if params.h2 * params.n / params.beta <= 1.0:
        raise ValueError("tail sum diverges unless h2 * n / beta > 1")
    total = 0.0
    for s in range(1, max_terms + 1):
        term = detour_ccdf(params, h_i, h_j, s)
        total += term
        if term < tol:
            break
    return total


def general_detour_bound(params: ModelParams) -> float:
    """Closed-form upper bound on the mean shortest-detour length.

    Valid in the regime ln n + ln h2 - ln beta > 0 (supercritical mean
    degree); raises outside it.
    """
    denom = math.log(params.n) + math.log(params.h2) - math.log(params.beta)
    if denom <= 0:
        raise ValueError("out of regime: need ln(n) + ln(h2) - ln(beta) > 0")
    numer = (
        -2.0 * params.log_h_mean
        - math.log(params.h2_q * params.landmark_count)
        + math.log(params.n * params.beta * params.h2)
        + math.log(denom)
        - EULER_GAMMA
    )
    return numer / denom + 0.5


def er_detour_bound(n: int, k_avg: float, landmark_count: int) -> float:
    """Erdos-Renyi detour bound (2 ln n - ln K) / ln k_avg."""
    _check_er(n, k_avg)
    if landmark_count < 1:
        raise ValueError("need at least one landmark")
    return (2.0 * math.log(n) - math.log(landmark_count)) / math.log(k_avg)


def er_mean_distance(n: int, k_avg: float) -> float:
    """Mean inter-node distance ln n / ln k_avg in Erdos-Renyi graphs."""
    _check_er(n, k_avg)
    return math.log(n) / math.log(k_avg)


def _check_er(n: int, k_avg: float) -> None:
    if n < 2:
        raise ValueError("need n >= 2")
    if k_avg <= 1:
        raise ValueError("need mean degree k_avg > 1 (log divergence at 1)")


def ba_detour_bound(n: int, m: int, landmark_count: int, h2_q: float | None = None) -> float:
    """Barabasi-Albert detour bound for landmark second moment ``h2_q``.

    ``h2_q=None`` uses the top-degree-pool moment ln(M)/M with
    M = ln(n) * K. Needs n >= 16 (so ln ln n > 0) and m >= 3 (so
    ln(m/2) > 0).
    """
    _check_ba_n(n)
    if m < 3:
        raise ValueError("need m >= 3 so that ln(m/2) > 0")
    if landmark_count < 1:
        raise ValueError("need at least one landmark")
    if h2_q is None:
        h2_q = top_pool_second_moment(n, landmark_count)
    if h2_q <= 0:
        raise ValueError("h2_q must be positive")
    ln_n = math.log(n)
    ln_ln_n = math.log(ln_n)
    numer = (
        ln_n
        - math.log(h2_q * landmark_count)
        + ln_ln_n
        + math.log(ln_ln_n)
        + math.log(2.0 * math.log(m / 2.0) / m)
    )
    return numer / (ln_ln_n + math.log(m / 2.0)) + 0.5


def ba_top_pool_bound(n: int, landmark_count: int) -> float:
    """Detour bound when K landmarks come from the top-(ln n * K) degree pool:

        (ln n - ln ln K + 2 ln ln n) / ln ln n

    Asymptotically equal to the true Barabasi-Albert mean distance, which is
    why top-degree landmarks are enough for near-exact distance recovery.
    """
    _check_ba_n(n)
    if landmark_count < 2:
        raise ValueError("need at least 2 landmarks (ln ln K)")
    ln_ln_n = math.log(math.log(n))
    return (math.log(n) - math.log(math.log(landmark_count)) + 2.0 * ln_ln_n) / ln_ln_n


def ba_mean_distance(n: int) -> float:
    """Mean inter-node distance ln n / ln ln n in Barabasi-Albert graphs."""
    _check_ba_n(n)
    return math.log(n) / math.log(math.log(n))


def _check_ba_n(n: int) -> None:
    if n < 16:
        raise ValueError("need n >= 16 so that ln ln n > 0")


# ---------------------------------------------------------------------------
# simulation harness


@dataclass(frozen=True)
class SimRecord:
    """One graph's measurements: mean true distance vs mean detour distance.

    ``ccdf[idx]`` is the empirical P(detour > s) for s = idx + 1.
    """

    model: str
    n: int
    strategy: str
    landmark_count: int
    seed_index: int
    pairs: int
    with_replacement: bool
    mean_true: float
    mean_detour: float
    bound: float
    ccdf: np.ndarray

    @property
    def ratio(self) -> float:
        return self.mean_detour / self.mean_true


@dataclass(frozen=True)
class SimReport:
    """Per-seed records plus aggregate means for one configuration."""

    records: list[SimRecord]
    config: dict
    summary: dict = field(default_factory=dict)


def resolve_landmark_count(k_spec, n: int) -> int:
    """Resolve a landmark-count request: an integer, "logn", or "sqrt"."""
    if isinstance(k_spec, str):
        if k_spec == "logn":
            return math.ceil(math.log(n))
        if k_spec == "sqrt":
            return math.ceil(math.sqrt(n))
        try:
            return int(k_spec)
        except ValueError:
            raise ValueError(f"bad landmark count spec {k_spec!r}") from None
    return int(k_spec)


def _choose_landmarks(g: Graph, strategy: str, count: int, rng, seed, top_pool: int | None):
    n = g.num_nodes
    if count >= n:
        raise ValueError(f"landmark count {count} must be below node count {n}")
    if strategy == "uniform":
        return np.sort(rng.choice(n, size=count, replace=False))
    if strategy == "top_degree":
        pool_size = top_pool if top_pool is not None else math.ceil(math.log(n) * count)
        pool_size = max(count, min(pool_size, n))
        deg = g.degrees()
        pool = np.lexsort((np.arange(n), -deg))[:pool_size]
        return np.sort(rng.choice(pool, size=count, replace=False))
    if strategy == "cluster":
        part = fluidc_multi(g, count, seed=seed)
        return select_landmarks(g, part, "degree").landmarks
    raise ValueError(f"unknown strategy {strategy!r}")


def simulate_detour(
    g: Graph,
    strategy: str = "uniform",
    landmark_count: int = 10,
    pair_samples: int = 500,
    seed=0,
    top_pool: int | None = None,
) -> SimRecord:
    """Measure true vs detour distances over sampled node pairs of one graph.

    Pairs are sampled inside the largest component, excluding landmark
    endpoints (a landmark endpoint collapses the detour to the direct
    distance and would bias the mean low). Sampling is without replacement
    unless more pairs are requested than exist, which flips
    ``with_replacement`` on.
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng_land, rng_pairs, seed_cluster = ss.spawn(3)
    rng = as_rng(rng_pairs)

    comp = connected_components(g)
    if comp.count > 1:
        nodes = comp.largest()
        g = g.subgraph(nodes)

    landmarks = _choose_landmarks(g, strategy, landmark_count, as_rng(rng_land), seed_cluster, top_pool)
    profile = distance_vectors(g, landmarks)

    is_landmark = np.zeros(g.num_nodes, dtype=bool)
    is_landmark[landmarks] = True
    eligible = np.flatnonzero(~is_landmark)
    if len(eligible) < 2:
        raise ValueError("not enough non-landmark nodes to sample pairs")
    available = len(eligible) * (len(eligible) - 1) // 2
    with_replacement = pair_samples > available

    us = np.empty(pair_samples, dtype=np.int64)
    vs = np.empty(pair_samples, dtype=np.int64)
    seen: set[tuple[int, int]] = set()
    filled = 0
    while filled < pair_samples:
        a, b = rng.integers(len(eligible), size=2)
        if a == b:
            continue
        u, v = int(eligible[min(a, b)]), int(eligible[max(a, b)])
        if not with_replacement:
            if (u, v) in seen:
                continue
            seen.add((u, v))
        us[filled] = u
        vs[filled] = v
        filled += 1

    true_dist = np.empty(pair_samples, dtype=np.int64)
    for u in np.unique(us):
        dist_u = bfs_distances(g, int(u))
        rows = us == u
        true_dist[rows] = dist_u[vs[rows]]
    detours = min_detour_many(profile, us, vs)

    max_s = int(detours.max())
    ccdf = np.array([(detours > s).mean() for s in range(1, max_s + 1)])
    return SimRecord(
        model="input",
        n=g.num_nodes,
        strategy=strategy,
        landmark_count=len(landmarks),
        seed_index=0,
        pairs=pair_samples,
        with_replacement=with_replacement,
        mean_true=float(true_dist.mean()),
        mean_detour=float(detours.mean()),
        bound=math.nan,
        ccdf=ccdf,
    )


def closed_form_bound(spec: GenSpec, strategy: str, landmark_count: int) -> float:
    """Bound column matching a generator configuration and strategy."""
    if spec.model == "er":
        return er_detour_bound(spec.n, spec.k_avg, landmark_count)
    if spec.model == "ba":
        if strategy in ("top_degree", "cluster"):
            return ba_top_pool_bound(spec.n, landmark_count)
        return ba_detour_bound(spec.n, spec.m, landmark_count, h2_q=math.log(spec.n) / spec.n)
    # hidden-variable model: use the general bound with the matching moments
    if spec.h_const is not None:
        h2 = spec.h_const**2
        log_h = math.log(spec.h_const)
        h2_q = h2
    else:
        h2 = math.log(spec.n) / spec.n
        log_h = 0.5 - math.log(spec.n) / 2.0 - 1.0 / (2.0 * spec.n)
        h2_q = top_pool_second_moment(spec.n, landmark_count) if strategy == "top_degree" else h2
    params = ModelParams(spec.n, landmark_count, h2, h2_q, spec.effective_beta(), log_h)
    return general_detour_bound(params)


def run_detour_study(
    spec: GenSpec,
    strategy: str = "uniform",
    k_spec="sqrt",
    pair_samples: int = 500,
    num_seeds: int = 5,
    root_seed: int = 0,
    top_pool: int | None = None,
) -> SimReport:
    """Generate graphs across seeds, measure detours, attach the matching bound."""
    if num_seeds < 1:
        raise ValueError("need at least one seed")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    spec.validate()
    landmark_count = resolve_landmark_count(k_spec, spec.n)
    bound = closed_form_bound(spec, strategy, landmark_count)

    records = []
    for i in range(num_seeds):
        g = spec.generate(derive_seed(root_seed, "sim-graph", i))
        rec = simulate_detour(
            g,
            strategy=strategy,
            landmark_count=landmark_count,
            pair_samples=pair_samples,
            seed=derive_seed(root_seed, "sim-run", i),
            top_pool=top_pool,
        )
        records.append(
            SimRecord(
                model=spec.model,
                n=rec.n,
                strategy=rec.strategy,
                landmark_count=rec.landmark_count,
                seed_index=i,
                pairs=rec.pairs,
                with_replacement=rec.with_replacement,
                mean_true=rec.mean_true,
                mean_detour=rec.mean_detour,
                bound=bound,
                ccdf=rec.ccdf,
            )
        )

    config = {
        "format_version": SIM_REPORT_VERSION,
        "model": spec.model,
        "n": spec.n,
        "k_avg": spec.k_avg,
        "m": spec.m,
        "strategy": strategy,
        "landmark_count": landmark_count,
        "pair_samples": pair_samples,
        "num_seeds": num_seeds,
        "root_seed": root_seed,
    }
    summary = {
        "mean_true": float(np.mean([r.mean_true for r in records])),
        "mean_detour": float(np.mean([r.mean_detour for r in records])),
        "bound": bound,
    }
    summary["detour_over_true"] = summary["mean_detour"] / summary["mean_true"]
    summary["bound_over_detour"] = bound / summary["mean_detour"]
    return SimReport(records, config, summary)


def sim_report_csv(report: SimReport) -> str:
    """One row per seed plus a summary row; ccdf cell is `p1;p2;...` for s=1.."""
    lines = [
        "row,model,n,strategy,landmark_count,seed_index,pairs,with_replacement,"
        "mean_true,mean_detour,detour_over_true,bound,ccdf"
    ]
    for r in report.records:
        ccdf = ";".join(fmt_real(p) for p in r.ccdf)
        lines.append(
            f"seed,{r.model},{r.n},{r.strategy},{r.landmark_count},{r.seed_index},"
            f"{r.pairs},{int(r.with_replacement)},{fmt_real(r.mean_true)},"
            f"{fmt_real(r.mean_detour)},{fmt_real(r.ratio)},{fmt_real(r.bound)},{ccdf}"
        )
    s = report.summary
    c = report.config
    lines.append(
        f"summary,{c['model']},{c['n']},{c['strategy']},{c['landmark_count']},,"
        f"{c['pair_samples']},,{fmt_real(s['mean_true'])},{fmt_real(s['mean_detour'])},"
        f"{fmt_real(s['detour_over_true'])},{fmt_real(s['bound'])},"
    )
    return "\n".join(lines) + "\n"


def write_sim_report(report: SimReport, csv_path, summary_json_path=None) -> None:
    atomic_write_text(csv_path, sim_report_csv(report))
    if summary_json_path is not None:
        payload = {"config": report.config, "summary": report.summary}
        atomic_write_text(summary_json_path, json.dumps(payload, indent=2) + "\n")


# ---------------------------------------------------------------------------
# landmark degree-rank experiment


@dataclass(frozen=True)
class RankRow:
    """Aggregated degree ranks of cluster-selected landmarks for one size n.

    ``mean_rank_pct`` averages over every landmark of every run;
    ``worst_rank_pct`` averages each run's worst (largest) landmark rank, i.e.
    the smallest top-percentage that contains all of a run's landmarks.
    """

    n: int
    landmark_count: int
    threshold_rank: int
    mean_rank_pct: float
    worst_rank_pct: float
    threshold_pct: float
    fraction_within: float
    num_seeds: int


def degree_ranks(g: Graph, nodes) -> np.ndarray:
    """Competition degree rank (1 = highest degree; ties share the better rank)."""
    deg = g.degrees()
    sorted_deg = np.sort(deg)
    node_deg = deg[np.asarray(nodes, dtype=np.int64)]
    higher = g.num_nodes - np.searchsorted(sorted_deg, node_deg, side="right")
    return higher + 1


def landmark_rank_experiment(
    n_list,
    m: int = 5,
    eta: int = 1,
    num_seeds: int = 10,
    root_seed: int = 0,
) -> list[RankRow]:
    """Where do cluster-selected landmarks sit in the global degree ranking?

    For each n: generate a Barabasi-Albert graph, cluster it hierarchically,
    select degree landmarks, and record each landmark's global degree rank.
    Reported per n: the mean rank as a percentage of n, and the fraction of
    landmarks ranked within the top ceil((ln n)^2).
    """
    from .clustering import hierarchical_partition
    from .randgraph import gen_ba

    rows = []
    for n in n_list:
        threshold = math.ceil(math.log(n) ** 2)
        all_ranks = []
        worst = []
        k_seen = 0
        for i in range(num_seeds):
            g = gen_ba(n, m, derive_seed(root_seed, f"rank-graph-{n}", i))
            part = hierarchical_partition(g, eta, derive_seed(root_seed, f"rank-cluster-{n}", i))
            profile = select_landmarks(g, part, "degree")
            ranks = degree_ranks(g, profile.landmarks)
            all_ranks.append(ranks)
            worst.append(int(ranks.max()))
            k_seen = part.k
        ranks = np.concatenate(all_ranks)
        rows.append(
            RankRow(
                n=n,
                landmark_count=k_seen,
                threshold_rank=threshold,
                mean_rank_pct=float(ranks.mean()) / n * 100.0,
                worst_rank_pct=float(np.mean(worst)) / n * 100.0,
                threshold_pct=threshold / n * 100.0,
                fraction_within=float((ranks <= threshold).mean()),
                num_seeds=num_seeds,
            )
        )
    return rows


def rank_table_csv(rows: list[RankRow]) -> str:
    lines = [
        "n,landmark_count,threshold_rank,mean_rank_pct,worst_rank_pct,"
        "threshold_pct,fraction_within,num_seeds"
    ]
    for r in rows:
        lines.append(
            f"{r.n},{r.landmark_count},{r.threshold_rank},{fmt_real(r.mean_rank_pct)},"
            f"{fmt_real(r.worst_rank_pct)},{fmt_real(r.threshold_pct)},"
            f"{fmt_real(r.fraction_within)},{r.num_seeds}"
        )
    return "\n".join(lines) + "\n"
