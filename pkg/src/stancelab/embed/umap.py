"""UMAP-style embedding: fuzzy kNN graph plus negative-sampling SGD layout."""

from __future__ import annotations

import numpy as np
from numba import njit
from scipy.optimize import curve_fit

from .common import EmbedConfig, per_index_uniform, rescale, similarity_to_distance

SIGMA_MIN = 1e-12
SIGMA_MAX = 1e12
BISECTION_STEPS = 64
NEGATIVE_SAMPLES = 5
GRAD_CLIP = 4.0


def knn_from_distances(d: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbors per row, self excluded, distances ascending."""
    n = d.shape[0]
    if k >= n:
        raise ValueError("k must be below the number of points")
    idx = np.empty((n, k), dtype=np.int64)
    dist = np.empty((n, k))
    for i in range(n):
        row = d[i].copy()
        row[i] = np.inf
        order = np.argsort(row, kind="stable")[:k]
        idx[i] = order
        dist[i] = row[order]
    return idx, dist


def fit_sigmas(knn_distances: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-point (rho, sigma): rho is the nearest distance, sigma solves
    sum_j exp(-max(0, d_ij - rho) / sigma) = log2(k) by bisection.

    Returns (rho, sigma, degenerate-row flags).
    """
    d = np.asarray(knn_distances, dtype=np.float64)
    n, kk = d.shape
    if kk < 2 or kk != k:
        raise ValueError("need k >= 2 sorted neighbor distances per point")
    target = np.log2(k)
    rho = d[:, 0].copy()
    sigma = np.empty(n)
    flags = np.zeros(n, dtype=bool)
    for i in range(n):
        shifted = np.clip(d[i] - rho[i], 0.0, None)
        if shifted.max() == 0.0:
            # all neighbors at distance rho: the sum is k for any sigma
            sigma[i] = np.sqrt(SIGMA_MIN * SIGMA_MAX)
            flags[i] = True
            continue
        lo, hi = SIGMA_MIN, SIGMA_MAX
        s = 1.0
        for _ in range(BISECTION_STEPS):
            s = np.sqrt(lo * hi)
            val = np.exp(-shifted / s).sum()
            if val > target:
                hi = s
            else:
                lo = s
        sigma[i] = s
    return rho, sigma, flags


def fuzzy_graph(d: np.ndarray, n_neighbors: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Symmetrized edge list (heads, tails, weights) with w = a + b - a*b."""
    n = d.shape[0]
    idx, dist = knn_from_distances(d, n_neighbors)
    rho, sigma, _ = fit_sigmas(dist, n_neighbors)
    w = np.zeros((n, n))
    for i in range(n):
        w[i, idx[i]] = np.exp(-np.clip(dist[i] - rho[i], 0.0, None) / sigma[i])
    sym = w + w.T - w * w.T
    heads, tails = np.nonzero(np.triu(sym, k=1) > 0)
    return heads.astype(np.int64), tails.astype(np.int64), sym[heads, tails]


def _offset_exponential(t: np.ndarray, min_dist: float, spread: float) -> np.ndarray:
    return np.where(t <= min_dist, 1.0, np.exp(-(t - min_dist) / spread))


def fit_curve_params(min_dist: float, spread: float = 1.0) -> tuple[float, float]:
    """Least-squares (a, b) so (1 + a*t^(2b))^-1 tracks the offset exponential."""
    t = np.linspace(0.0, 3.0 * spread, 300)
    target = _offset_exponential(t, min_dist, spread)

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    (a, b), _ = curve_fit(curve, t, target, p0=(1.0, 1.0), maxfev=20000)
    return float(a), float(b)


@njit(cache=True)
def _sgd_layout(pos, heads, tails, weights, a, b, epochs, n_neg, rng_state):
    n = pos.shape[0]
    m = heads.shape[0]
    for epoch in range(epochs):
        alpha = 1.0 - epoch / epochs
        for e in range(m):
            i = heads[e]
            j = tails[e]
            w = weights[e]
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            d_sq = dx * dx + dy * dy
            if d_sq > 0.0:
                g = (-2.0 * a * b * d_sq ** (b - 1.0)) / (1.0 + a * d_sq**b)
                gx = min(max(g * dx, -GRAD_CLIP), GRAD_CLIP)
                gy = min(max(g * dy, -GRAD_CLIP), GRAD_CLIP)
                pos[i, 0] += alpha * w * gx
                pos[i, 1] += alpha * w * gy
                pos[j, 0] -= alpha * w * gx
                pos[j, 1] -= alpha * w * gy
            for endpoint in (i, j):
                for _ in range(n_neg):
                    # xorshift64* for deterministic negative sampling
                    rng_state ^= rng_state >> 12
                    rng_state ^= (rng_state << 25) & 0xFFFFFFFFFFFFFFFF
                    rng_state ^= rng_state >> 27
                    k = ((rng_state * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF) % n
                    if k == endpoint:
                        continue
                    dx = pos[endpoint, 0] - pos[k, 0]
                    dy = pos[endpoint, 1] - pos[k, 1]
                    d_sq = dx * dx + dy * dy
                    if d_sq > 0.0:
                        g = 2.0 * b / ((0.001 + d_sq) * (1.0 + a * d_sq**b))
                        gx = min(max(g * dx, -GRAD_CLIP), GRAD_CLIP)
                        gy = min(max(g * dy, -GRAD_CLIP), GRAD_CLIP)
                    else:
                        gx = GRAD_CLIP
                        gy = GRAD_CLIP
                    pos[endpoint, 0] += alpha * gx
                    pos[endpoint, 1] += alpha * gy
    return pos


def embed_umap(sim: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    """Fuzzy graph + per-edge SGD with 5 negative samples per positive."""
    sim = np.asarray(sim, dtype=np.float64)
    n = sim.shape[0]
    if n <= cfg.umap_n_neighbors:
        raise ValueError(
            f"n={n} must exceed umap_n_neighbors={cfg.umap_n_neighbors}; lower n_neighbors"
        )
    d = similarity_to_distance(sim)
    heads, tails, weights = fuzzy_graph(d, cfg.umap_n_neighbors)
    a, b = fit_curve_params(cfg.umap_min_dist)
    pos = per_index_uniform(cfg.seed, n, -10.0, 10.0)
    rng_state = np.uint64((cfg.seed * 0x9E3779B97F4A7C15 + 0x632BE59BD9B4E019) & 0xFFFFFFFFFFFFFFFF or 1)
    pos = _sgd_layout(
        pos,
        heads,
        tails,
        weights.astype(np.float64),
        float(a),
        float(b),
        int(cfg.umap_epochs),
        NEGATIVE_SAMPLES,
        rng_state,
    )
    return rescale(pos)
