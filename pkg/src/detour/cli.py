"""Command-line surface: preprocess, simulate, bounds, landmark-rank, eval.

Every command is deterministic given its full flag set including --seed.
Exit codes: 0 success, 1 pipeline failure, 2 usage or input error. A TOML
config file may mirror any flag (explicit flags win; positional-free flags
only, keys use underscores).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import theory
from .features import preprocess, write_features
from .graph import load_edge_list
from .clustering import hierarchical_partition
from .landmarks import distance_vectors, select_landmarks
from .linkeval import metric_auc, metric_hits_at_k, metric_mrr, score_pairs, split_edges
from .randgraph import GenSpec
from .util import atomic_write_text


class UsageError(Exception):
    """Bad flags or unusable input; maps to exit code 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detour", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="TOML file mirroring these flags (flags win)")
        p.add_argument("--seed", type=int, default=None, help="root seed (default 0)")

    p = sub.add_parser("preprocess", help="edge list -> per-node positional feature file")
    add_common(p)
    p.add_argument("--input", help="edge-list path")
    p.add_argument("--out", help="feature file path")
    p.add_argument("--eta", type=int, default=None, help="cluster-count multiplier (default 5)")
    p.add_argument("--centrality", choices=["degree", "betweenness", "closeness"], default=None)
    p.add_argument("--heat-t", default=None, help="heat-kernel parameter or 'auto'")
    p.add_argument("--random-sign-flip", action="store_true", default=None)
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)

    p = sub.add_parser("simulate", help="measure detour distances on generated graphs")
    add_common(p)
    p.add_argument("--model", choices=["er", "ba", "hidden"], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k-avg", type=float, default=None, help="er mean degree")
    p.add_argument("--m", type=int, default=None, help="ba attachment count")
    p.add_argument("--h-const", type=float, default=None, help="hidden: constant hidden variable")
    p.add_argument("--beta", type=float, default=None, help="hidden: edge probability divisor")
    p.add_argument("--strategy", choices=["uniform", "top-degree", "cluster"], default=None)
    p.add_argument("--k", default=None, help="landmark count: integer, 'logn', or 'sqrt'")
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None, help="number of generated graphs")
    p.add_argument("--top-pool", type=int, default=None, help="top-degree pool size override")
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")

    p = sub.add_parser("bounds", help="print closed-form detour bounds")
    add_common(p)
    p.add_argument("--model", choices=["er", "ba"], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="landmark count")
    p.add_argument("--k-avg", type=float, default=None)
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("landmark-rank", help="degree ranks of cluster-selected landmarks")
    add_common(p)
    p.add_argument("--n-list", default=None, help="comma-separated sizes (default 500,1000,2000,5000)")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--eta", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("eval", help="heuristic link prediction metrics on an edge list")
    add_common(p)
    p.add_argument("--input", help="edge-list path")
    p.add_argument("--split", default=None, help="train/valid/test percentages, e.g. 70/10/20")
    p.add_argument("--scorer", choices=["aa", "cn", "detour"], default=None)
    p.add_argument("--metric", default=None, help="auc, hits@K, or mrr")
    p.add_argument("--eta", type=int, default=None, help="cluster multiplier for the detour scorer")
    p.add_argument("--out", default=None, help="JSON path (stdout if omitted)")
    return parser


def _load_config(path: str | None, command: str) -> dict:
    if not path:
        return {}
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    merged.update(data.get(command, {}))
    return merged


def _opt(args, config: dict, name: str, fallback):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return config.get(name, fallback)


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"missing required option {flag}")
    return value


def _load_graph(path: str | None):
    path = _require(path, "--input")
    if not os.path.exists(path):
        raise UsageError(f"input file not found: {path}")
    return load_edge_list(path)


def _cmd_preprocess(args, config) -> int:
    g, report = _load_graph(_opt(args, config, "input", None))
    heat = _opt(args, config, "heat_t", "auto")
    if isinstance(heat, str) and heat != "auto":
        heat = float(heat)
    fs = preprocess(
        g,
        eta=int(_opt(args, config, "eta", 5)),
        centrality=_opt(args, config, "centrality", "degree"),
        heat_t=heat,
        sign_flip=bool(_opt(args, config, "random_sign_flip", False)),
        seed=int(_opt(args, config, "seed", 0)),
    )
    out = _require(_opt(args, config, "out", None), "--out")
    write_features(fs, out, fmt=_opt(args, config, "format", "csv"))
    print(report.summary())
    print(f"wrote {fs.n} feature records (k={fs.k}) to {out}")
    return 0


def _genspec(args, config) -> GenSpec:
    model = _require(_opt(args, config, "model", None), "--model")
    n = int(_require(_opt(args, config, "n", None), "--n"))
    spec = GenSpec(
        model=model,
        n=n,
        k_avg=_opt(args, config, "k_avg", None),
        m=_opt(args, config, "m", None),
        h_const=_opt(args, config, "h_const", None),
        beta=_opt(args, config, "beta", None),
    )
    try:
        spec.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return spec


def _cmd_simulate(args, config) -> int:
    spec = _genspec(args, config)
    num_seeds = int(_opt(args, config, "seeds", 5))
    if num_seeds < 1:
        raise UsageError("--seeds must be at least 1")
    strategy = str(_opt(args, config, "strategy", "uniform")).replace("-", "_")
    try:
        report = theory.run_detour_study(
            spec,
            strategy=strategy,
            k_spec=_opt(args, config, "k", "sqrt"),
            pair_samples=int(_opt(args, config, "pairs", 500)),
            num_seeds=num_seeds,
            root_seed=int(_opt(args, config, "seed", 0)),
            top_pool=_opt(args, config, "top_pool", None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _opt(args, config, "out", None)
    if out:
        theory.write_sim_report(report, out, out + ".summary.json")
        print(f"wrote {len(report.records)} rows + summary to {out}")
    else:
        sys.stdout.write(theory.sim_report_csv(report))
    return 0


def _cmd_bounds(args, config) -> int:
    model = _require(_opt(args, config, "model", None), "--model")
    n = int(_require(_opt(args, config, "n", None), "--n"))
    k = int(_require(_opt(args, config, "k", None), "--k"))
    try:
        if model == "er":
            k_avg = float(_require(_opt(args, config, "k_avg", None), "--k-avg"))
            print(f"{theory.er_detour_bound(n, k_avg, k):.4f}, {theory.er_mean_distance(n, k_avg):.4f}")
        else:
            print(f"{theory.ba_top_pool_bound(n, k):.4f}, {theory.ba_mean_distance(n):.4f}")
            m = _opt(args, config, "m", None)
            if m is not None:
                print(f"finite_m_bound={theory.ba_detour_bound(n, int(m), k):.4f}")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return 0


def _cmd_landmark_rank(args, config) -> int:
    n_list_raw = _opt(args, config, "n_list", "500,1000,2000,5000")
    if isinstance(n_list_raw, str):
        n_list = [int(tok) for tok in n_list_raw.split(",") if tok.strip()]
    else:
        n_list = [int(x) for x in n_list_raw]
    if not n_list:
        raise UsageError("--n-list is empty")
    rows = theory.landmark_rank_experiment(
        n_list,
        m=int(_opt(args, config, "m", 5)),
        eta=int(_opt(args, config, "eta", 1)),
        num_seeds=int(_opt(args, config, "seeds", 10)),
        root_seed=int(_opt(args, config, "seed", 0)),
    )
    csv = theory.rank_table_csv(rows)
    out = _opt(args, config, "out", None)
    if out:
        atomic_write_text(out, csv)
        print(f"wrote {len(rows)} rows to {out}")
    else:
        sys.stdout.write(csv)
    return 0


def _parse_metric(raw: str) -> tuple[str, int | None]:
    if raw == "auc" or raw == "mrr":
        return raw, None
    if raw.startswith("hits@"):
        try:
            return "hits", int(raw.split("@", 1)[1])
        except ValueError:
            pass
    raise UsageError(f"unknown metric {raw!r} (want auc, hits@K, or mrr)")


def _cmd_eval(args, config) -> int:
    g, _ = _load_graph(_opt(args, config, "input", None))
    split_raw = str(_opt(args, config, "split", "70/10/20"))
    try:
        ratios = tuple(int(tok) for tok in split_raw.split("/"))
    except ValueError:
        raise UsageError(f"bad split {split_raw!r}") from None
    metric_name, hits_k = _parse_metric(str(_opt(args, config, "metric", "auc")))
    scorer = _opt(args, config, "scorer", "aa")
    seed = int(_opt(args, config, "seed", 0))
    try:
        split = split_edges(g, ratios, seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    if scorer == "detour":
        eta = int(_opt(args, config, "eta", 5))
        train_g = split.train_graph
        part = hierarchical_partition(train_g, eta=eta, seed=seed)
        model = distance_vectors(train_g, select_landmarks(train_g, part, "degree"))
    else:
        model = split.train_graph
    scored = score_pairs(scorer, model, split.test_pos, split.test_neg)

    if metric_name == "auc":
        value = metric_auc(scored)
    elif metric_name == "hits":
        if hits_k > len(split.test_neg):
            raise UsageError(f"hits@{hits_k} needs at least {hits_k} negatives, "
                             f"test split has {len(split.test_neg)}")
        value = metric_hits_at_k(scored, hits_k)
    else:
        value = metric_mrr(scored)

    payload = {
        "metric": metric_name if hits_k is None else f"hits@{hits_k}",
        "value": value,
        "k": hits_k,
        "scorer": scorer,
        "split": list(ratios),
        "seed": seed,
        "n": g.num_nodes,
        "edges": g.num_edges,
    }
    out = _opt(args, config, "out", None)
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        atomic_write_text(out, text)
        print(f"wrote metrics to {out}")
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "simulate": _cmd_simulate,
    "bounds": _cmd_bounds,
    "landmark-rank": _cmd_landmark_rank,
    "eval": _cmd_eval,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _load_config(args.config, args.command)
        return _COMMANDS[args.command](args, config)
    except (UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pipeline failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
