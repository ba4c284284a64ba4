"""2-D embeddings of the user similarity matrix: FD, t-SNE and UMAP-style."""

from __future__ import annotations

import numpy as np

from .common import EmbedConfig, rescale, similarity_to_distance
from .fd import embed_fd
from .tsne import calibrate_sigmas, embed_tsne
from .umap import embed_umap, fit_curve_params, fit_sigmas

__all__ = [
    "EmbedConfig",
    "embed",
    "embed_fd",
    "embed_tsne",
    "embed_umap",
    "rescale",
    "similarity_to_distance",
    "calibrate_sigmas",
    "fit_sigmas",
    "fit_curve_params",
]


def embed(sim: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    """Dispatch on cfg.method; output is axis-rescaled to [-1, 1]."""
    if cfg.method == "fd":
        return embed_fd(sim, cfg)
    if cfg.method == "tsne":
        return embed_tsne(sim, cfg)
    if cfg.method == "umap":
        return embed_umap(sim, cfg)
    raise ValueError(f"unknown embedding method {cfg.method!r}")
