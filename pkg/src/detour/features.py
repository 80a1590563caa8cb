"""End-to-end positional-feature pipeline and its file formats.

One run: hierarchical clustering, per-cluster landmark selection, distance
vectors, landmark-graph Laplacian memberships. Every node's record carries
its cluster and macro-cluster ids, a landmark flag, the K integer distances,
and the K membership reals. Files round-trip bit-exactly (reals printed with
17 significant digits) and each write drops a JSON metadata sidecar.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

import numpy as np

from .clustering import hierarchical_partition
from .graph import Graph
from .landmarks import distance_vectors, select_landmarks
from .spectral import assign_memberships, build_landmark_graph, spectral_encode
from .util import atomic_write_text, derive_seed, fmt_real

FORMAT_VERSION = 1


@dataclass(frozen=True)
class FeatureSet:
    """Per-node positional features plus the run metadata needed to replay them."""

    labels: list[str]
    cluster: np.ndarray
    macro: np.ndarray
    is_landmark: np.ndarray
    dvec: np.ndarray  # (n, k) int hop distances
    mvec: np.ndarray  # (n, k) float memberships
    sentinel: int
    meta: dict

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return self.dvec.shape[1]


def preprocess(
    g: Graph,
    eta: int = 5,
    centrality: str = "degree",
    heat_t: float | str = "auto",
    sign_flip: bool = False,
    seed: int = 0,
) -> FeatureSet:
    """Run the full positional-feature pipeline on one graph.

    A single root seed drives every stage (clustering, eigen perturbation,
    sign flips) through documented stage tags, so identical inputs and flags
    reproduce identical output bytes.
    """
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    partition = hierarchical_partition(g, eta=eta, seed=derive_seed(seed, "cluster"))
    timings["cluster_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    profile = select_landmarks(g, partition, kind=centrality)
    profile = distance_vectors(g, profile)
    timings["distances_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    lgraph = build_landmark_graph(profile, t=heat_t)
    enc = spectral_encode(lgraph, seed=derive_seed(seed, "perturb"))
    mvec = assign_memberships(
        enc, partition, sign_flip_seed=derive_seed(seed, "signs") if sign_flip else None
    )
    timings["spectral_s"] = time.perf_counter() - t0

    labels = g.labels if g.labels is not None else [str(i) for i in range(g.num_nodes)]
    is_landmark = np.zeros(g.num_nodes, dtype=bool)
    is_landmark[profile.landmarks] = True

    meta = {
        "format_version": FORMAT_VERSION,
        "n": g.num_nodes,
        "edges": g.num_edges,
        "k": partition.k,
        "r": partition.r,
        "eta": eta,
        "heat_t": lgraph.t,
        "sentinel": profile.sentinel,
        "seed": seed,
        "centrality": centrality,
        "sign_flip": sign_flip,
        "landmarks": [labels[int(v)] for v in profile.landmarks],
        "decisions": {
            "sentinel_rule": "max_finite_distance_plus_one",
            "k_rounding": "ceil_eta_ln_n_rounded_up_to_multiple_of_r",
            "k_base": partition.stats.get("k_base"),
            "k_planned": partition.stats.get("k_rounded"),
            "k_adjusted": partition.k_requested is not None,
            "clustering_converged": partition.converged,
            "eigen_perturb_rounds": enc.perturb_rounds,
            "eigen_degenerate": enc.degenerate,
        },
        "timings": timings,
    }
    return FeatureSet(
        labels, partition.cluster_of, partition.macro_of_node(), is_landmark,
        profile.dist, mvec, profile.sentinel, meta,
    )


def _header_lines(fs: FeatureSet) -> list[str]:
    return [
        f"# detour-features v{FORMAT_VERSION}",
        (
            f"# k={fs.k} r={fs.meta['r']} eta={fs.meta['eta']} "
            f"heat_t={fmt_real(fs.meta['heat_t'])} sentinel={fs.sentinel} "
            f"seed={fs.meta['seed']} sign_flip={int(fs.meta['sign_flip'])} "
            f"centrality={fs.meta['centrality']}"
        ),
    ]


def features_to_csv(fs: FeatureSet) -> str:
    k = fs.k
    cols = ["node", "cluster", "macro_cluster", "is_landmark"]
    cols += [f"d{i}" for i in range(k)] + [f"m{i}" for i in range(k)]
    lines = _header_lines(fs) + [",".join(cols)]
    for v in range(fs.n):
        row = [fs.labels[v], str(int(fs.cluster[v])), str(int(fs.macro[v])), str(int(fs.is_landmark[v]))]
        row += [str(int(x)) for x in fs.dvec[v]]
        row += [fmt_real(x) for x in fs.mvec[v]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def features_to_jsonl(fs: FeatureSet) -> str:
    lines = []
    for v in range(fs.n):
        lines.append(
            json.dumps(
                {
                    "node": fs.labels[v],
                    "cluster": int(fs.cluster[v]),
                    "macro_cluster": int(fs.macro[v]),
                    "is_landmark": bool(fs.is_landmark[v]),
                    "d": [int(x) for x in fs.dvec[v]],
                    "m": [float(fmt_real(x)) for x in fs.mvec[v]],
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + "\n"


def write_features(fs: FeatureSet, path: str | os.PathLike, fmt: str = "csv") -> None:
    """Write the feature file plus its `<path>.meta.json` sidecar atomically."""
    path = os.fspath(path)
    if fmt == "csv":
        atomic_write_text(path, features_to_csv(fs))
    elif fmt == "jsonl":
        atomic_write_text(path, features_to_jsonl(fs))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    atomic_write_text(path + ".meta.json", json.dumps(fs.meta, indent=2) + "\n")


def read_features(path: str | os.PathLike) -> FeatureSet:
    """Parse a feature file written by :func:`write_features` (either format)."""
    path = os.fspath(path)
    meta_path = path + ".meta.json"
    meta = {}
    if os.path.exists(meta_path):
        with open(meta_path, "r", encoding="utf8") as fh:
            meta = json.load(fh)
    with open(path, "r", encoding="utf8") as fh:
        first = fh.readline()
        fh.seek(0)
        if first.startswith("#"):
            return _read_csv(fh, meta)
        return _read_jsonl(fh, meta)


def _read_csv(fh, meta: dict) -> FeatureSet:
    header = fh.readline().strip()
    if not header.startswith("# detour-features"):
        raise ValueError("not a feature file")
    params = dict(tok.split("=", 1) for tok in fh.readline().strip("# \n").split())
    cols = fh.readline().strip().split(",")
    k = sum(1 for c in cols if c.startswith("d") and c[1:].isdigit())
    labels, cluster, macro, landmark, drows, mrows = [], [], [], [], [], []
    for line in fh:
        parts = line.rstrip("\n").split(",")
        labels.append(parts[0])
        cluster.append(int(parts[1]))
        macro.append(int(parts[2]))
        landmark.append(bool(int(parts[3])))
        drows.append([int(x) for x in parts[4 : 4 + k]])
        mrows.append([float(x) for x in parts[4 + k : 4 + 2 * k]])
    if not meta:
        meta = {
            "format_version": FORMAT_VERSION,
            "k": int(params["k"]),
            "r": int(params["r"]),
            "eta": int(params["eta"]),
            "heat_t": float(params["heat_t"]),
            "seed": int(params["seed"]),
            "sign_flip": bool(int(params["sign_flip"])),
            "centrality": params["centrality"],
        }
    return FeatureSet(
        labels,
        np.array(cluster, dtype=np.int64),
        np.array(macro, dtype=np.int64),
        np.array(landmark, dtype=bool),
        np.array(drows, dtype=np.int64),
        np.array(mrows, dtype=np.float64),
        int(params["sentinel"]),
        meta,
    )


def _read_jsonl(fh, meta: dict) -> FeatureSet:
    labels, cluster, macro, landmark, drows, mrows = [], [], [], [], [], []
    for line in fh:
        if not line.strip():
            continue
        rec = json.loads(line)
        labels.append(rec["node"])
        cluster.append(rec["cluster"])
        macro.append(rec["macro_cluster"])
        landmark.append(rec["is_landmark"])
        drows.append(rec["d"])
        mrows.append(rec["m"])
    sentinel = int(meta.get("sentinel", max(max(r) for r in drows)))
    return FeatureSet(
        labels,
        np.array(cluster, dtype=np.int64),
        np.array(macro, dtype=np.int64),
        np.array(landmark, dtype=bool),
        np.array(drows, dtype=np.int64),
        np.array(mrows, dtype=np.float64),
        sentinel,
        meta,
    )
