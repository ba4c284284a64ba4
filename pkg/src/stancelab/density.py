"""Core-cluster detection in the 2-D embedding: flat-kernel Mean Shift and DBSCAN."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

OUTLIER = -1


@dataclass
class MeanShiftConfig:
    bandwidth: Optional[float] = None
    quantile: float = 0.3
    bin_seeding: bool = True
    max_iter: int = 300
    min_peak_fraction: float = 0.01
    cluster_all: bool = False

    def __post_init__(self):
        if not 0 < self.quantile <= 1:
            raise ValueError("quantile must be in (0, 1]")
        if self.bandwidth is not None and self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")


@dataclass
class DbscanConfig:
    epsilon: float = 0.5
    min_samples: int = 5

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.min_samples < 1:
            raise ValueError("min_samples must be >= 1")


@dataclass
class ClusterLabels:
    """Per-point cluster id (OUTLIER = -1), ids contiguous and ordered by size desc."""

    labels: np.ndarray
    centers: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if (self.labels >= 0).any() else 0


def estimate_bandwidth(points: np.ndarray, quantile: float = 0.3) -> float:
    """Mean distance to the k-th nearest neighbor, k = floor(n*quantile), self excluded."""
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points")
    k = min(n - 1, max(1, int(np.floor(n * quantile))))
    d = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(d, np.inf)
    d.sort(axis=1)
    return float(d[:, k - 1].mean())


def _bin_seeds(points: np.ndarray, bandwidth: float) -> np.ndarray:
    """Centers of occupied grid cells of side = bandwidth."""
    cells = np.unique(np.floor(points / bandwidth), axis=0)
    return (cells + 0.5) * bandwidth


def mean_shift(points: np.ndarray, cfg: MeanShiftConfig) -> ClusterLabels:
    """Flat-kernel Mean Shift with peak merging and orphan-peak discarding.

    Seeds walk to the mean of in-bandwidth points until displacement falls below
    1e-3 * bandwidth. Converged peaks within one bandwidth merge (larger basin wins);
    peaks whose basin holds fewer than min_peak_fraction * n points are dropped.
    Points farther than the bandwidth from every kept center become OUTLIER unless
    cluster_all is set.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < 1:
        raise ValueError("need at least one point")

    bandwidth = cfg.bandwidth
    if bandwidth is None:
        if n == 1:
            bandwidth = 1e-3
        else:
            bandwidth = estimate_bandwidth(points, cfg.quantile)
    if bandwidth == 0.0:
        print("mean_shift: degenerate geometry, bandwidth fallback 1e-3", file=sys.stderr)
        bandwidth = 1e-3

    seeds = _bin_seeds(points, bandwidth) if cfg.bin_seeding else points.copy()
    tol = 1e-3 * bandwidth

    peaks = []
    for seed in seeds:
        center = seed.copy()
        for _ in range(cfg.max_iter):
            within = ((points - center) ** 2).sum(axis=1) <= bandwidth * bandwidth
            if not within.any():
                break
            new_center = points[within].mean(axis=0)
            shift = np.sqrt(((new_center - center) ** 2).sum())
            center = new_center
            if shift < tol:
                break
        basin = int((((points - center) ** 2).sum(axis=1) <= bandwidth * bandwidth).sum())
        if basin > 0:
            peaks.append((basin, center))

    if not peaks:
        print("mean_shift: no peaks found, all points OUTLIER", file=sys.stderr)
        return ClusterLabels(labels=np.full(n, OUTLIER))

    # merge peaks within one bandwidth, larger basin first
    peaks.sort(key=lambda bc: (-bc[0], bc[1][0], bc[1][1]))
    kept: list[tuple[int, np.ndarray]] = []
    for basin, center in peaks:
        if all(((center - c) ** 2).sum() > bandwidth * bandwidth for _, c in kept):
            kept.append((basin, center))

    # a peak needs at least min_peak_fraction*n points, and never fewer than 2
    # (a single-point basin is always an orphan), capped so n=1 stays clusterable
    min_basin = min(n, max(2.0, cfg.min_peak_fraction * n))
    kept = [(basin, c) for basin, c in kept if basin >= min_basin]
    if not kept:
        print("mean_shift: all peaks orphaned, all points OUTLIER", file=sys.stderr)
        return ClusterLabels(labels=np.full(n, OUTLIER))

    centers = np.array([c for _, c in kept])
    d = np.sqrt(((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=-1))
    nearest = d.argmin(axis=1)
    labels = np.where(
        cfg.cluster_all | (d[np.arange(n), nearest] <= bandwidth), nearest, OUTLIER
    )
    return _renumber_by_size(labels, centers)


def _renumber_by_size(labels: np.ndarray, centers: Optional[np.ndarray] = None) -> ClusterLabels:
    """Make ids contiguous and ordered by member count desc (first occurrence breaks ties)."""
    labels = np.asarray(labels)
    old_ids = [int(c) for c in np.unique(labels) if c != OUTLIER]
    sizes = {c: int((labels == c).sum()) for c in old_ids}
    first = {c: int(np.argmax(labels == c)) for c in old_ids}
    order = sorted(old_ids, key=lambda c: (-sizes[c], first[c]))
    remap = {c: rank for rank, c in enumerate(order)}
    out = np.array([remap[int(c)] if c != OUTLIER else OUTLIER for c in labels], dtype=np.int64)
    new_centers = (
        np.array([centers[c] for c in order]) if centers is not None and len(order) else np.empty((0, 2))
    )
    return ClusterLabels(labels=out, centers=new_centers)


def dbscan(points: np.ndarray, cfg: DbscanConfig) -> ClusterLabels:
    """Density clustering: components of core points plus their border points.

    A core point has >= min_samples points (itself included) within epsilon. Border
    points join the cluster of their lowest-index core neighbor; everything else is
    OUTLIER.
    """
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if n < 1:
        raise ValueError("need at least one point")
    d_sq = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=-1)
    reach = d_sq <= cfg.epsilon * cfg.epsilon
    core = reach.sum(axis=1) >= cfg.min_samples

    labels = np.full(n, OUTLIER, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if not core[i] or labels[i] != OUTLIER:
            continue
        # grow the component of core points reachable from i
        labels[i] = cluster
        frontier = [i]
        while frontier:
            p = frontier.pop()
            for q in np.nonzero(reach[p])[0]:
                if core[q] and labels[q] == OUTLIER:
                    labels[q] = cluster
                    frontier.append(q)
        cluster += 1

    # border points: lowest-index core neighbor decides the cluster
    for i in range(n):
        if labels[i] != OUTLIER or core[i]:
            continue
        core_neighbors = np.nonzero(reach[i] & core)[0]
        if core_neighbors.size:
            labels[i] = labels[core_neighbors[0]]

    return _renumber_by_size(labels)
