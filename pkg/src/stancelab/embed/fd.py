"""Fruchterman-Reingold force-directed layout on the similarity graph."""

from __future__ import annotations

import numpy as np

from .common import EmbedConfig, per_index_uniform, rescale

INITIAL_TEMPERATURE = 0.1  # a tenth of the unit-square side, the classic choice


def embed_fd(sim: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    """Spring layout: edges where sim > 0 attract, all pairs repel.

    Attractive force along an edge is w*d^2/k, repulsion between every pair k^2/d
    with k = 1/sqrt(n). Displacement per step is capped by a temperature decaying
    linearly to 0 over cfg.fd_iterations. Returns rescaled (n, 2) coordinates.
    """
    sim = np.asarray(sim, dtype=np.float64)
    n = sim.shape[0]
    if n < 1:
        raise ValueError("need at least one point")
    if n == 1:
        return np.zeros((1, 2))

    w = sim.copy()
    np.fill_diagonal(w, 0.0)
    k = 1.0 / np.sqrt(n)
    pos = per_index_uniform(cfg.seed, n, 0.0, 1.0)

    iterations = cfg.fd_iterations
    for it in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]          # (n, n, 2)
        dist = np.sqrt((delta**2).sum(axis=-1))
        np.clip(dist, 1e-12, None, out=dist)
        # repulsion k^2/d minus attraction w*d^2/k, both along delta/d
        coeff = k * k / dist**2 - w * dist / k
        np.fill_diagonal(coeff, 0.0)
        disp = (coeff[:, :, None] * delta).sum(axis=1)

        length = np.sqrt((disp**2).sum(axis=1))
        np.clip(length, 1e-12, None, out=length)
        temperature = INITIAL_TEMPERATURE * (1.0 - it / iterations)
        pos += disp / length[:, None] * np.minimum(length, temperature)[:, None]
    return rescale(pos)
