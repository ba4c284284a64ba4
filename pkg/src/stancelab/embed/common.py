"""Shared embedding config, deterministic initialization and axis rescaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METHODS = ("fd", "tsne", "umap")


@dataclass
class EmbedConfig:
    method: str = "umap"
    seed: int = 0
    fd_iterations: int = 50
    tsne_perplexity: float = 30.0
    tsne_early_exaggeration: float = 12.0
    tsne_iterations: int = 1000
    umap_n_neighbors: int = 15
    umap_min_dist: float = 0.1
    umap_epochs: int = 500
    output_dims: int = 2

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.output_dims != 2:
            raise ValueError("only 2-D output is supported")
        if self.tsne_perplexity <= 0 or self.tsne_early_exaggeration <= 0:
            raise ValueError("tsne_perplexity and tsne_early_exaggeration must be positive")


def per_index_uniform(seed: int, n: int, low: float, high: float) -> np.ndarray:
    """(n, 2) uniform init where point i depends only on (seed, i), not on n."""
    out = np.empty((n, 2))
    for i in range(n):
        out[i] = np.random.default_rng([seed, i]).uniform(low, high, size=2)
    return out


def per_index_normal(seed: int, n: int, std: float) -> np.ndarray:
    out = np.empty((n, 2))
    for i in range(n):
        out[i] = np.random.default_rng([seed, i]).normal(0.0, std, size=2)
    return out


def rescale(coords: np.ndarray) -> np.ndarray:
    """Map each axis affinely onto [-1, 1]; a degenerate axis collapses to 0."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[0] < 1:
        raise ValueError("coords must be a non-empty (n, 2) array")
    out = np.empty_like(coords)
    for axis in range(coords.shape[1]):
        lo, hi = coords[:, axis].min(), coords[:, axis].max()
        if hi == lo:
            out[:, axis] = 0.0
        else:
            out[:, axis] = 2.0 * (coords[:, axis] - lo) / (hi - lo) - 1.0
    return out


def similarity_to_distance(sim: np.ndarray) -> np.ndarray:
    d = 1.0 - np.asarray(sim, dtype=np.float64)
    np.fill_diagonal(d, 0.0)
    np.clip(d, 0.0, None, out=d)
    return d
