"""Mean Shift vs DBSCAN on synthetic 2-D point clouds.

Shows where the two clusterers agree and where they differ: well-separated
Gaussian blobs (both fine), blobs plus uniform noise (DBSCAN's outlier
handling vs Mean Shift's orphan-basin rule), and touching blobs (density
valleys matter).

Run:  python3 demos/clustering_playground.py
"""

import numpy as np

from stancelab.density import (
    OUTLIER, DbscanConfig, MeanShiftConfig, dbscan, estimate_bandwidth, mean_shift,
)

rng = np.random.default_rng(0)


def blobs(centers, sigma, n_each):
    return np.vstack([rng.normal(c, sigma, (n_each, 2)) for c in centers])


def describe(name, points, ms_cfg, db_cfg):
    ms = mean_shift(points, ms_cfg)
    db = dbscan(points, db_cfg)
    ms_out = int(np.sum(ms.labels == OUTLIER))
    db_out = int(np.sum(db.labels == OUTLIER))
    print(f"{name}:")
    print(f"  mean shift: {ms.n_clusters} clusters, {ms_out} outliers, "
          f"centers {np.round(ms.centers, 2).tolist()}")
    print(f"  dbscan:     {db.n_clusters} clusters, {db_out} outliers\n")


# 1. Three clean blobs — both recover exactly three groups.
pts = blobs([(0, 0), (4, 0), (2, 3)], 0.3, 100)
print(f"estimated bandwidth for the clean blobs: {estimate_bandwidth(pts):.3f}\n")
describe("three clean blobs", pts, MeanShiftConfig(), DbscanConfig(epsilon=0.5))

# 2. Blobs in a sea of uniform noise — DBSCAN marks the noise as outliers;
#    Mean Shift only orphans the tiniest basins, so raise min_peak_fraction.
noisy = np.vstack([blobs([(0, 0), (4, 0)], 0.25, 80),
                   rng.uniform(-2, 6, (60, 2))])
describe("two blobs + uniform noise", noisy,
         MeanShiftConfig(min_peak_fraction=0.1),
         DbscanConfig(epsilon=0.35, min_samples=5))

# 3. Touching blobs — only a density valley separates them, so the scale
#    parameters (bandwidth / epsilon) decide whether they merge.
touching = blobs([(0, 0), (1.2, 0)], 0.3, 150)
describe("touching blobs, default scales", touching,
         MeanShiftConfig(), DbscanConfig(epsilon=0.5))
describe("touching blobs, tighter scales", touching,
         MeanShiftConfig(bandwidth=0.5), DbscanConfig(epsilon=0.15, min_samples=8))
