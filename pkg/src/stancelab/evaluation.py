"""Purity/recall scoring against gold labels, success criteria, and grid runs."""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .density import OUTLIER, ClusterLabels

MIN_CLUSTERS = 2
MIN_PURITY = 0.8
MIN_RECALL = 0.3


@dataclass
class EvalSummary:
    n_clusters: int
    per_cluster_purity: list[float]
    avg_purity: Optional[float]
    recall: float
    avg_cluster_size: float
    success: bool

    def to_dict(self) -> dict:
        return {
            "n_clusters": self.n_clusters,
            "per_cluster_purity": self.per_cluster_purity,
            "avg_purity": self.avg_purity,
            "recall": self.recall,
            "avg_cluster_size": self.avg_cluster_size,
            "success": self.success,
        }


def purity(
    labels: Sequence[int],
    users: Sequence[str],
    gold: Mapping[str, str],
    size_weighted: bool = True,
) -> tuple[list[float], Optional[float]]:
    """Per-cluster majority-gold fraction and its (size-weighted) average.

    Users without a gold label are excluded from purity; outliers are excluded
    entirely. Returns (per-cluster list, average or None if undefined).
    """
    members: dict[int, list[str]] = {}
    for label, uid in zip(labels, users):
        if label != OUTLIER:
            members.setdefault(int(label), []).append(uid)
    per_cluster: list[float] = []
    weights: list[int] = []
    for cluster in sorted(members):
        golds = [gold[u] for u in members[cluster] if u in gold]
        if not golds:
            print(f"purity: cluster {cluster} has no gold-labeled users, skipped", file=sys.stderr)
            continue
        counts = {}
        for g in golds:
            counts[g] = counts.get(g, 0) + 1
        per_cluster.append(max(counts.values()) / len(golds))
        weights.append(len(golds))
    if not per_cluster:
        return [], None
    if size_weighted:
        avg = float(np.average(per_cluster, weights=weights))
    else:
        avg = float(np.mean(per_cluster))
    return per_cluster, avg


def recall_and_success(
    labels: Sequence[int],
    users: Sequence[str],
    gold: Mapping[str, str],
    n_available: int,
    size_weighted: bool = True,
) -> EvalSummary:
    """Assemble the summary and apply the success gate:
    at least 2 clusters, average purity >= 0.8, recall >= 0.3.
    """
    labels = np.asarray(labels)
    clustered = int((labels != OUTLIER).sum())
    n_clusters = len({int(l) for l in labels if l != OUTLIER})
    recall = clustered / n_available if n_available > 0 else 0.0
    per_cluster, avg_purity = purity(labels, users, gold, size_weighted)
    avg_size = clustered / n_clusters if n_clusters else 0.0
    success = (
        n_clusters >= MIN_CLUSTERS
        and avg_purity is not None
        and avg_purity >= MIN_PURITY
        and recall >= MIN_RECALL
    )
    return EvalSummary(
        n_clusters=n_clusters,
        per_cluster_purity=per_cluster,
        avg_purity=avg_purity,
        recall=recall,
        avg_cluster_size=avg_size,
        success=success,
    )


@dataclass
class GridSpec:
    feature_spaces: list[str] = field(default_factory=lambda: ["R"])
    methods: list[str] = field(default_factory=lambda: ["umap"])
    clusterers: list[str] = field(default_factory=lambda: ["meanshift"])
    sample_sizes: list[int] = field(default_factory=lambda: [250_000])
    user_counts: list[int] = field(default_factory=lambda: [1000])
    seeds: list[int] = field(default_factory=lambda: [0])

    def __post_init__(self):
        for name in ("feature_spaces", "methods", "clusterers", "sample_sizes", "user_counts", "seeds"):
            if not getattr(self, name):
                raise ValueError(f"grid axis {name} must be non-empty")


def run_grid(records, gold: Mapping[str, str], grid: GridSpec, **pipeline_kwargs) -> list[dict]:
    """Full pipeline per grid cell, averaged over seeds, with wall-clock timing.

    Returns one row dict per cell; failed cells carry status FAILED and a reason.
    """
    from . import pipeline as pl
    from .corpus import sample_tweets

    rows = []
    for sample_size in grid.sample_sizes:
        for user_count in grid.user_counts:
            for space in grid.feature_spaces:
                for method in grid.methods:
                    for clusterer in grid.clusterers:
                        per_seed = []
                        failure = None
                        for seed in grid.seeds:
                            sub = sample_tweets(records, sample_size, seed)
                            cfg = pl.PipelineConfig(
                                feature_space=space,
                                method=method,
                                clusterer=clusterer,
                                n_top=user_count,
                                seed=seed,
                                **pipeline_kwargs,
                            )
                            t0 = time.perf_counter()
                            try:
                                result = pl.run(sub, cfg, gold=gold)
                            except pl.PipelineError as exc:
                                failure = str(exc)
                                break
                            elapsed = time.perf_counter() - t0
                            assert result.summary is not None
                            per_seed.append(
                                {
                                    "seed": seed,
                                    "purity": result.summary.avg_purity,
                                    "n_clusters": result.summary.n_clusters,
                                    "cluster_size": result.summary.avg_cluster_size,
                                    "recall": result.summary.recall,
                                    "success": result.summary.success,
                                    "seconds": elapsed,
                                }
                            )
                        row = {
                            "sample_size": sample_size,
                            "n_users": user_count,
                            "features": space,
                            "dim_reduce": method,
                            "clusterer": clusterer,
                        }
                        if failure is not None:
                            row["status"] = "FAILED"
                            row["reason"] = failure
                        else:
                            row["status"] = "OK"
                            purities = [s["purity"] for s in per_seed if s["purity"] is not None]
                            row["avg_purity"] = float(np.mean(purities)) if purities else None
                            row["avg_n_clusters"] = float(np.mean([s["n_clusters"] for s in per_seed]))
                            row["avg_cluster_size"] = float(np.mean([s["cluster_size"] for s in per_seed]))
                            row["avg_recall"] = float(np.mean([s["recall"] for s in per_seed]))
                            row["avg_seconds"] = float(np.mean([s["seconds"] for s in per_seed]))
                            row["success"] = all(s["success"] for s in per_seed)
                            row["per_seed"] = per_seed
                        rows.append(row)
    return rows


def grid_markdown(rows: list[dict]) -> str:
    header = (
        "| Sample | Users | Features | Dim Reduce | Clusterer | Purity | Clusters | "
        "Cluster Size | Recall | Time (s) | Status |"
    )
    sep = "|" + "---|" * 11
    lines = [header, sep]
    for r in rows:
        if r["status"] == "OK":
            purity_s = f"{r['avg_purity']:.3f}" if r["avg_purity"] is not None else "n/a"
            lines.append(
                f"| {r['sample_size']} | {r['n_users']} | {r['features']} | {r['dim_reduce']} | "
                f"{r['clusterer']} | {purity_s} | {r['avg_n_clusters']:.1f} | "
                f"{r['avg_cluster_size']:.1f} | {r['avg_recall']:.3f} | {r['avg_seconds']:.1f} | "
                f"{'success' if r['success'] else 'ok'} |"
            )
        else:
            lines.append(
                f"| {r['sample_size']} | {r['n_users']} | {r['features']} | {r['dim_reduce']} | "
                f"{r['clusterer']} | - | - | - | - | - | FAILED: {r['reason']} |"
            )
    return "\n".join(lines)


def grid_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2, sort_keys=True)
