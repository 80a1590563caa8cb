"""Landmark-graph Laplacian encoding.

The K landmarks form a small weighted graph with heat-kernel weights
``exp(-d(u,v)^2 / T)`` over inter-landmark hop distances. Membership vectors
are rows of the eigenvector matrix of its normalized Laplacian: node v in
cluster k receives row k (the coordinates of landmark k across the full
eigenspectrum), so all members of a cluster share one vector and neighboring
clusters get similar ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import Partition
from .landmarks import LandmarkProfile
from .util import as_rng


@dataclass(frozen=True)
class LandmarkGraph:
    """K x K symmetric heat-kernel weights with zero diagonal."""

    weights: np.ndarray
    t: float

    @property
    def k(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class SpectralEncoding:
    """Eigenpairs of the landmark-graph normalized Laplacian.

    Eigenvalues ascend; eigenvector columns are orthonormal with canonical
    signs (largest-magnitude coordinate positive). ``degenerate`` is set when
    adjacent eigenvalues still sit closer than the gap tolerance after the
    allowed perturbation rounds.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    min_gap: float
    degenerate: bool
    perturb_rounds: int = 0


def build_landmark_graph(profile: LandmarkProfile, t: float | str = "auto") -> LandmarkGraph:
    """Heat-kernel weight matrix over inter-landmark distances.

    Distances are read out of the profile's distance matrix (row of landmark
    u, column v); unreachable pairs use the sentinel distance, which still
    yields a small positive weight so weighted degrees never vanish.
    ``t="auto"`` uses the median of squared finite inter-landmark distances,
    floored at 1.
    """
    if profile.dist is None or profile.sentinel is None:
        raise ValueError("profile has no distance matrix; run distance_vectors first")
    k = profile.k
    if k < 2:
        raise ValueError("need at least 2 landmarks to build a landmark graph")
    dmat = profile.dist[profile.landmarks].astype(np.float64)

    if isinstance(t, str):
        if t != "auto":
            raise ValueError(f"unknown heat parameter {t!r}")
        iu = np.triu_indices(k, 1)
        pairs = dmat[iu]
        finite = pairs[pairs != profile.sentinel]
        basis = finite if finite.size else pairs
        t_val = max(float(np.median(basis**2)), 1.0)
    else:
        t_val = float(t)
        if t_val <= 0:
            raise ValueError("heat parameter t must be positive")

    weights = np.exp(-(dmat**2) / t_val)
    weights = (weights + weights.T) / 2.0
    np.fill_diagonal(weights, 0.0)
    return LandmarkGraph(weights, t_val)


def normalized_laplacian(lg: LandmarkGraph) -> np.ndarray:
    """I - D^{-1/2} W D^{-1/2} for weighted degrees D_ii = sum_j W_ij."""
    deg = lg.weights.sum(axis=1)
    if (deg <= 0).any():
        raise ValueError("landmark with zero weighted degree")
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = -lg.weights * inv_sqrt[:, None] * inv_sqrt[None, :]
    lap = (lap + lap.T) / 2.0
    np.fill_diagonal(lap, 1.0)
    return lap


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius norm drops below ``tol``.
    Returns (eigenvalues ascending, eigenvector columns in matching order).
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.tril(a, -1) ** 2))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for j in range(out.shape[1]):
        i = int(np.argmax(np.abs(out[:, j])))
        if out[i, j] < 0:
            out[:, j] = -out[:, j]
    return out


def eigendecompose(lap: np.ndarray, gap_tol: float = 1e-8) -> SpectralEncoding:
    """Eigenpairs of one symmetric matrix, flagged when eigenvalues collide.

    ``degenerate`` means some adjacent eigenvalue gap is below ``gap_tol``;
    resolving that via edge-weight perturbation is the job of
    :func:`spectral_encode`, which owns the landmark graph.
    """
    lap = np.asarray(lap, dtype=np.float64)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise ValueError("matrix must be square")
    if np.abs(lap - lap.T).max(initial=0.0) > 1e-10:
        raise ValueError("matrix must be symmetric")
    vals, vecs = jacobi_eigh(lap)
    vecs = _canonical_signs(vecs)
    min_gap = float(np.diff(vals).min()) if len(vals) > 1 else np.inf
    return SpectralEncoding(vals, vecs, min_gap, degenerate=min_gap < gap_tol)


def spectral_encode(
    lg: LandmarkGraph,
    gap_tol: float = 1e-8,
    perturb_scale: float = 1e-6,
    seed=0,
    max_rounds: int = 3,
) -> SpectralEncoding:
    """Eigendecompose the landmark Laplacian, perturbing away eigenvalue ties.

    While adjacent eigenvalues sit closer than ``gap_tol``, symmetric uniform
    noise of magnitude ``perturb_scale * max(weight)`` is added to the
    off-diagonal weights and the Laplacian is recomputed, at most
    ``max_rounds`` times; a still-degenerate spectrum is returned flagged.
    """
    rng = as_rng(seed)
    weights = lg.weights
    enc = eigendecompose(normalized_laplacian(LandmarkGraph(weights, lg.t)), gap_tol)
    rounds = 0
    while enc.degenerate and rounds < max_rounds:
        rounds += 1
        k = weights.shape[0]
        mag = perturb_scale * float(weights.max())
        noise = rng.uniform(0.0, mag, size=(k, k))
        noise = np.triu(noise, 1)
        noise = noise + noise.T
        weights = lg.weights + noise
        np.fill_diagonal(weights, 0.0)
        enc = eigendecompose(normalized_laplacian(LandmarkGraph(weights, lg.t)), gap_tol)
    return SpectralEncoding(enc.eigenvalues, enc.vectors, enc.min_gap, enc.degenerate, rounds)


def assign_memberships(
    enc: SpectralEncoding,
    partition: Partition,
    sign_flip_seed=None,
) -> np.ndarray:
    """Per-node membership vectors: row k of the eigenvector matrix for cluster k.

    With ``sign_flip_seed`` set, each eigenvector column is independently
    multiplied by +-1 (probability one half) before rows are extracted. That
    is an emission-time augmentation; pairwise dot products of membership
    vectors are unchanged by any flip pattern, raw coordinates are not.
    """
    k = enc.vectors.shape[0]
    if partition.k != k:
        raise ValueError(f"partition has {partition.k} clusters but encoding has {k}")
    vectors = enc.vectors
    if sign_flip_seed is not None:
        rng = as_rng(sign_flip_seed)
        flips = np.where(rng.random(k) < 0.5, -1.0, 1.0)
        vectors = vectors * flips[None, :]
    return vectors[partition.cluster_of]
