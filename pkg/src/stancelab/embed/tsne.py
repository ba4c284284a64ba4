"""Exact t-SNE on a precomputed similarity matrix, with entropy-matched sigmas."""

from __future__ import annotations

import numpy as np

from .common import EmbedConfig, per_index_normal, rescale, similarity_to_distance

SIGMA_MIN = 1e-12
SIGMA_MAX = 1e12
PERPLEXITY_TOL = 1e-4
MAX_BISECTIONS = 100
EXAGGERATION_PHASE = 250
LEARNING_RATE = 200.0
MOMENTUM_EARLY = 0.5
MOMENTUM_LATE = 0.8


def _row_perplexity(d_sq_row: np.ndarray, sigma: float) -> tuple[float, np.ndarray]:
    """2^H of the conditional distribution for one row (self already excluded)."""
    logits = -d_sq_row / (2.0 * sigma * sigma)
    logits -= logits.max()
    p = np.exp(logits)
    p /= p.sum()
    h = -(p * np.log2(np.clip(p, 1e-300, None))).sum()
    return 2.0**h, p


def calibrate_sigmas(
    distances: np.ndarray, perplexity: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-row bisection so the conditional distribution's perplexity hits the target.

    Returns (sigmas, conditional P with zero diagonal, flags for rows where the
    target was unreachable).
    """
    d = np.asarray(distances, dtype=np.float64)
    n = d.shape[0]
    if not perplexity < n - 1:
        raise ValueError("perplexity must be below n-1")
    sigmas = np.empty(n)
    flags = np.zeros(n, dtype=bool)
    p_cond = np.zeros((n, n))
    for i in range(n):
        others = np.arange(n) != i
        d_sq = d[i, others] ** 2
        lo, hi = SIGMA_MIN, SIGMA_MAX
        sigma = np.sqrt(lo * hi)
        hit = False
        for _ in range(MAX_BISECTIONS):
            sigma = np.sqrt(lo * hi)
            perp, p = _row_perplexity(d_sq, sigma)
            if abs(perp - perplexity) < PERPLEXITY_TOL:
                hit = True
                break
            if perp > perplexity:
                hi = sigma
            else:
                lo = sigma
        if not hit:
            flags[i] = True
            if np.allclose(d_sq, d_sq[0]):
                # entropy is independent of sigma; fall back to the clamp midpoint
                sigma = np.sqrt(SIGMA_MIN * SIGMA_MAX)
        sigmas[i] = sigma
        p_cond[i, others] = _row_perplexity(d_sq, sigma)[1]
    return sigmas, p_cond, flags


def joint_affinities(sim: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized P from the cosine-similarity matrix (distance = 1 - sim)."""
    d = similarity_to_distance(sim)
    _, p_cond, _ = calibrate_sigmas(d, perplexity)
    n = d.shape[0]
    return (p_cond + p_cond.T) / (2.0 * n)


def low_dim_affinities(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Student-t Q matrix and the unnormalized kernel (1+||yi-yj||^2)^-1."""
    d_sq = ((y[:, None, :] - y[None, :, :]) ** 2).sum(axis=-1)
    inv = 1.0 / (1.0 + d_sq)
    np.fill_diagonal(inv, 0.0)
    q = inv / inv.sum()
    return q, inv


def kl_divergence(p: np.ndarray, y: np.ndarray) -> float:
    q, _ = low_dim_affinities(y)
    mask = p > 0
    return float((p[mask] * np.log(p[mask] / np.clip(q[mask], 1e-300, None))).sum())


def gradient(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Exact KL gradient: 4 * sum_j (p_ij - q_ij) * kernel_ij * (y_i - y_j)."""
    q, inv = low_dim_affinities(y)
    coeff = 4.0 * (p - q) * inv
    return coeff.sum(axis=1)[:, None] * y - coeff @ y


def embed_tsne(sim: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    """Gradient descent on KL(P||Q) with early exaggeration and momentum switch."""
    sim = np.asarray(sim, dtype=np.float64)
    n = sim.shape[0]
    if n < 4:
        raise ValueError("t-SNE needs at least 4 points")
    p = joint_affinities(sim, cfg.tsne_perplexity)
    y = per_index_normal(cfg.seed, n, 1e-4)
    update = np.zeros_like(y)
    for it in range(cfg.tsne_iterations):
        exaggerate = it < EXAGGERATION_PHASE
        p_eff = p * cfg.tsne_early_exaggeration if exaggerate else p
        grad = gradient(p_eff, y)
        momentum = MOMENTUM_EARLY if it < EXAGGERATION_PHASE else MOMENTUM_LATE
        update = momentum * update - LEARNING_RATE * grad
        y = y + update
        y = y - y.mean(axis=0)
    return rescale(y)
