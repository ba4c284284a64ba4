"""End-to-end pipeline: corpus -> vectors -> 2-D embedding -> clusters -> reports."""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from . import __version__
from .corpus import EngagedSelection, TweetRecord, aggregate_users, sample_tweets, select_engaged
from .density import OUTLIER, ClusterLabels, DbscanConfig, MeanShiftConfig, dbscan, mean_shift
from .embed import EmbedConfig, embed
from .evaluation import EvalSummary, recall_and_success
from .features import build_vectors, cosine_matrix
from .salience import format_report, salience_report

CLUSTERERS = ("meanshift", "dbscan")


class PipelineError(Exception):
    """Base pipeline failure; exit_code drives the CLI exit status."""

    exit_code = 1


class UnreadableInputError(PipelineError):
    exit_code = 2


class TooFewUsersError(PipelineError):
    exit_code = 3


class NoClustersError(PipelineError):
    exit_code = 4


@dataclass
class PipelineConfig:
    feature_space: str = "R"
    method: str = "umap"
    clusterer: str = "meanshift"
    n_top: int = 1000
    min_interactions: int = 5
    sample_size: Optional[int] = None
    seed: int = 0
    # embedding hyper-parameters
    fd_iterations: int = 50
    tsne_perplexity: float = 30.0
    tsne_early_exaggeration: float = 12.0
    tsne_iterations: int = 1000
    umap_n_neighbors: int = 15
    umap_min_dist: float = 0.1
    umap_epochs: int = 500
    # clustering hyper-parameters
    bandwidth: Optional[float] = None
    quantile: float = 0.3
    bin_seeding: bool = True
    min_peak_fraction: float = 0.01
    cluster_all: bool = False
    epsilon: float = 0.5
    min_samples: int = 5
    # salience
    v_threshold: float = 0.8
    top_k: int = 5

    def __post_init__(self):
        if self.clusterer not in CLUSTERERS:
            raise ValueError(f"clusterer must be one of {CLUSTERERS}")

    def embed_config(self) -> EmbedConfig:
        return EmbedConfig(
            method=self.method,
            seed=self.seed,
            fd_iterations=self.fd_iterations,
            tsne_perplexity=self.tsne_perplexity,
            tsne_early_exaggeration=self.tsne_early_exaggeration,
            tsne_iterations=self.tsne_iterations,
            umap_n_neighbors=self.umap_n_neighbors,
            umap_min_dist=self.umap_min_dist,
            umap_epochs=self.umap_epochs,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class PipelineResult:
    users: list[str]
    embedding: np.ndarray
    clusters: ClusterLabels
    salience: dict
    summary: Optional[EvalSummary]
    timings: dict = field(default_factory=dict)


def _min_users_required(cfg: PipelineConfig) -> int:
    if cfg.method == "umap":
        return cfg.umap_n_neighbors + 1
    if cfg.method == "tsne":
        return max(4, int(np.ceil(cfg.tsne_perplexity)) + 2)
    return 2


def run(
    records: Sequence[TweetRecord],
    cfg: PipelineConfig,
    gold: Optional[Mapping[str, str]] = None,
) -> PipelineResult:
    """Run every stage on in-memory records. Raises PipelineError subclasses."""
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    if cfg.sample_size is not None:
        records = sample_tweets(records, cfg.sample_size, cfg.seed)
    aggregates = aggregate_users(records)
    sel = EngagedSelection(
        n_top=cfg.n_top, min_interactions=cfg.min_interactions, feature_space=cfg.feature_space
    )
    users = select_engaged(aggregates, sel)
    timings["corpus"] = time.perf_counter() - t0

    need = _min_users_required(cfg)
    if len(users) < need:
        raise TooFewUsersError(
            f"only {len(users)} engaged user(s); {cfg.method} needs at least {need} "
            f"(lower --min-interactions or umap_n_neighbors, or supply more data)"
        )

    t0 = time.perf_counter()
    vectors = build_vectors(aggregates, users, cfg.feature_space)
    sim = cosine_matrix(vectors)
    timings["features"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    coords = embed(sim, cfg.embed_config())
    timings["embed"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if cfg.clusterer == "meanshift":
        ms = MeanShiftConfig(
            bandwidth=cfg.bandwidth,
            quantile=cfg.quantile,
            bin_seeding=cfg.bin_seeding,
            min_peak_fraction=cfg.min_peak_fraction,
            cluster_all=cfg.cluster_all,
        )
        clusters = mean_shift(coords, ms)
    else:
        clusters = dbscan(coords, DbscanConfig(epsilon=cfg.epsilon, min_samples=cfg.min_samples))
    timings["cluster"] = time.perf_counter() - t0
    if clusters.n_clusters == 0:
        raise NoClustersError("clustering produced no clusters (all points outliers)")

    t0 = time.perf_counter()
    cluster_of_user = {u: int(l) for u, l in zip(users, clusters.labels)}
    report = salience_report(records, cluster_of_user, cfg.v_threshold, cfg.top_k)
    timings["salience"] = time.perf_counter() - t0

    summary = None
    if gold is not None:
        summary = recall_and_success(clusters.labels, users, gold, n_available=len(users))

    return PipelineResult(
        users=users,
        embedding=coords,
        clusters=clusters,
        salience=report,
        summary=summary,
        timings=timings,
    )


def write_embedding_tsv(users: Sequence[str], coords: np.ndarray, path: Path) -> None:
    with open(path, "w") as out:
        for uid, (x, y) in zip(users, coords):
            out.write(f"{uid}\t{x:.6f}\t{y:.6f}\n")


def read_embedding_tsv(path: Path) -> tuple[list[str], np.ndarray]:
    users, coords = [], []
    with open(path) as f:
        for line in f:
            uid, x, y = line.rstrip("\n").split("\t")
            users.append(uid)
            coords.append((float(x), float(y)))
    return users, np.asarray(coords)


def write_clusters_tsv(users: Sequence[str], clusters: ClusterLabels, path: Path) -> None:
    with open(path, "w") as out:
        for uid, label in zip(users, clusters.labels):
            out.write(f"{uid}\t{int(label)}\n")


def read_clusters_tsv(path: Path) -> tuple[list[str], np.ndarray]:
    users, labels = [], []
    with open(path) as f:
        for line in f:
            uid, label = line.rstrip("\n").split("\t")
            users.append(uid)
            labels.append(int(label))
    return users, np.asarray(labels, dtype=np.int64)


def write_centers_tsv(clusters: ClusterLabels, path: Path) -> None:
    with open(path, "w") as out:
        for cid, (x, y) in enumerate(clusters.centers):
            out.write(f"{cid}\t{x:.6f}\t{y:.6f}\n")


def write_artifacts(
    result: PipelineResult,
    cfg: PipelineConfig,
    out_dir: Path,
) -> dict:
    """Write all pipeline artifacts; returns the run manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    write_embedding_tsv(result.users, result.embedding, out_dir / "embedding.tsv")
    write_clusters_tsv(result.users, result.clusters, out_dir / "clusters.tsv")
    if len(result.clusters.centers):
        write_centers_tsv(result.clusters, out_dir / "centers.tsv")
    with open(out_dir / "salience.json", "w") as f:
        json.dump(result.salience, f, indent=2, sort_keys=True)
    with open(out_dir / "salience.txt", "w") as f:
        f.write(format_report(result.salience))
    if result.summary is not None:
        with open(out_dir / "eval.json", "w") as f:
            json.dump(result.summary.to_dict(), f, indent=2, sort_keys=True)

    manifest = {
        "version": __version__,
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "timings": result.timings,
        "n_users": len(result.users),
        "n_clusters": result.clusters.n_clusters,
    }
    with open(out_dir / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    return manifest
