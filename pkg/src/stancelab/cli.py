"""Command-line driver: per-stage subcommands plus the full pipeline."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, pipeline as pl
from .corpus import (
    EngagedSelection,
    aggregate_users,
    parse_tweet_stream,
    sample_tweets,
    select_engaged,
)
from .density import DbscanConfig, MeanShiftConfig, dbscan, mean_shift
from .embed import EmbedConfig, embed
from .evaluation import GridSpec, grid_json, grid_markdown, recall_and_success, run_grid
from .features import build_vectors, cosine_matrix, dump_matrix_tsv, dump_vectors_tsv
from .plotting import emit_scatter
from .salience import format_report, salience_report
from .synth import SynthConfig, generate, read_gold_tsv, write_gold_tsv, write_jsonl

CONFIG_KEYS = {f.name for f in pl.PipelineConfig.__dataclass_fields__.values()}


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` config file; '#' starts a comment."""
    values: dict = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def _coerce(key: str, val):
    import dataclasses

    field = pl.PipelineConfig.__dataclass_fields__[key]
    if isinstance(val, str):
        if field.type in ("int", "Optional[int]"):
            return int(val)
        if field.type in ("float", "Optional[float]"):
            return float(val)
        if field.type == "bool":
            return val.lower() in ("1", "true", "yes")
    return val


def build_pipeline_config(args) -> pl.PipelineConfig:
    """Defaults, overridden by config file, overridden by explicit flags."""
    values = {}
    if getattr(args, "config", None):
        values.update({k: _coerce(k, v) for k, v in read_config_file(args.config).items()})
    flag_map = {
        "feature_space": "feature_space",
        "method": "method",
        "clusterer": "clusterer",
        "n_top": "n_top",
        "min_interactions": "min_interactions",
        "sample_size": "sample_size",
        "seed": "seed",
        "fd_iterations": "fd_iterations",
        "tsne_perplexity": "tsne_perplexity",
        "tsne_early_exaggeration": "tsne_early_exaggeration",
        "tsne_iterations": "tsne_iterations",
        "umap_n_neighbors": "umap_n_neighbors",
        "umap_min_dist": "umap_min_dist",
        "umap_epochs": "umap_epochs",
        "bandwidth": "bandwidth",
        "quantile": "quantile",
        "bin_seeding": "bin_seeding",
        "min_peak_fraction": "min_peak_fraction",
        "cluster_all": "cluster_all",
        "epsilon": "epsilon",
        "min_samples": "min_samples",
        "v_threshold": "v_threshold",
        "top_k": "top_k",
    }
    for attr, key in flag_map.items():
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    return pl.PipelineConfig(**values)


def add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--feature-space", dest="feature_space", choices=["T", "R", "H", "TRH"])
    p.add_argument("--dimred", dest="method", choices=["fd", "tsne", "umap"])
    p.add_argument("--cluster", dest="clusterer", choices=["meanshift", "dbscan"])
    p.add_argument("--top-users", dest="n_top", type=int)
    p.add_argument("--min-interactions", dest="min_interactions", type=int)
    p.add_argument("--sample-size", dest="sample_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--fd-iterations", dest="fd_iterations", type=int)
    p.add_argument("--tsne-perplexity", dest="tsne_perplexity", type=float)
    p.add_argument("--tsne-early-exaggeration", dest="tsne_early_exaggeration", type=float)
    p.add_argument("--tsne-iterations", dest="tsne_iterations", type=int)
    p.add_argument("--umap-n-neighbors", dest="umap_n_neighbors", type=int)
    p.add_argument("--umap-min-dist", dest="umap_min_dist", type=float)
    p.add_argument("--umap-epochs", dest="umap_epochs", type=int)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--quantile", type=float)
    p.add_argument("--bin-seeding", dest="bin_seeding", action="store_true", default=None)
    p.add_argument("--no-bin-seeding", dest="bin_seeding", action="store_false")
    p.add_argument("--min-peak-fraction", dest="min_peak_fraction", type=float)
    p.add_argument("--cluster-all", dest="cluster_all", action="store_true", default=None)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--min-samples", dest="min_samples", type=int)
    p.add_argument("--v-threshold", dest="v_threshold", type=float)
    p.add_argument("--top-k", dest="top_k", type=int)


def _read_corpus(path: str):
    try:
        with open(path) as f:
            return parse_tweet_stream(f)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        sys.exit(2)


def cmd_ingest(args) -> int:
    stats: dict = {}
    try:
        with open(args.corpus) as f:
            records = parse_tweet_stream(f, stats=stats)
    except OSError as exc:
        print(f"error: cannot read {args.corpus}: {exc}", file=sys.stderr)
        return 2
    aggregates = aggregate_users(records)
    print(json.dumps({"records": len(records), "users": len(aggregates), **stats}, indent=2))
    return 0


def cmd_synth(args) -> int:
    cfg = SynthConfig(
        n_sides=args.sides,
        users_per_side=args.users_per_side,
        accounts_per_side=args.accounts_per_side,
        shared_accounts=args.shared_accounts,
        hashtags_per_side=args.hashtags_per_side,
        zipf_s=args.zipf_s,
        zipf_max=args.zipf_max,
        cross_retweet_prob=args.cross_retweet_prob,
        outlier_users=args.outlier_users,
        seed=args.seed if args.seed is not None else 0,
    )
    records, gold = generate(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.jsonl", "w") as f:
        write_jsonl(records, f)
    with open(out / "gold.tsv", "w") as f:
        write_gold_tsv(gold, f)
    print(f"wrote {len(records)} records, {len(gold)} gold labels to {out}/")
    return 0


def cmd_features(args) -> int:
    cfg = build_pipeline_config(args)
    records = _read_corpus(args.corpus)
    if cfg.sample_size is not None:
        records = sample_tweets(records, cfg.sample_size, cfg.seed)
    aggregates = aggregate_users(records)
    users = select_engaged(
        aggregates,
        EngagedSelection(cfg.n_top, cfg.min_interactions, cfg.feature_space),
    )
    vectors = build_vectors(aggregates, users, cfg.feature_space)
    sim = cosine_matrix(vectors)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "vectors.tsv", "w") as f:
        dump_vectors_tsv(users, vectors, f)
    with open(out / "similarity.tsv", "w") as f:
        dump_matrix_tsv(users, sim, f)
    np.save(out / "similarity.npy", sim)
    (out / "users.txt").write_text("\n".join(users) + "\n")
    print(f"{len(users)} users, matrix {sim.shape} written to {out}/")
    return 0


def cmd_embed(args) -> int:
    cfg = build_pipeline_config(args)
    sim = np.load(Path(args.features) / "similarity.npy")
    users = (Path(args.features) / "users.txt").read_text().splitlines()
    coords = embed(sim, cfg.embed_config())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pl.write_embedding_tsv(users, coords, out / "embedding.tsv")
    print(f"embedding written to {out / 'embedding.tsv'}")
    return 0


def cmd_cluster(args) -> int:
    cfg = build_pipeline_config(args)
    users, coords = pl.read_embedding_tsv(Path(args.embedding))
    if cfg.clusterer == "meanshift":
        clusters = mean_shift(
            coords,
            MeanShiftConfig(
                bandwidth=cfg.bandwidth,
                quantile=cfg.quantile,
                bin_seeding=cfg.bin_seeding,
                min_peak_fraction=cfg.min_peak_fraction,
                cluster_all=cfg.cluster_all,
            ),
        )
    else:
        clusters = dbscan(coords, DbscanConfig(cfg.epsilon, cfg.min_samples))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pl.write_clusters_tsv(users, clusters, out / "clusters.tsv")
    if len(clusters.centers):
        pl.write_centers_tsv(clusters, out / "centers.tsv")
    print(f"{clusters.n_clusters} cluster(s) written to {out / 'clusters.tsv'}")
    return 0 if clusters.n_clusters else 4


def cmd_label(args) -> int:
    cfg = build_pipeline_config(args)
    records = _read_corpus(args.corpus)
    users, labels = pl.read_clusters_tsv(Path(args.clusters))
    cluster_of_user = {u: int(l) for u, l in zip(users, labels)}
    report = salience_report(records, cluster_of_user, cfg.v_threshold, cfg.top_k)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "salience.json", "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
    (out / "salience.txt").write_text(format_report(report))
    print(format_report(report))
    return 0


def cmd_eval(args) -> int:
    users, labels = pl.read_clusters_tsv(Path(args.clusters))
    with open(args.gold) as f:
        gold = read_gold_tsv(f)
    summary = recall_and_success(labels, users, gold, n_available=len(users))
    print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_grid(args) -> int:
    records = _read_corpus(args.corpus)
    with open(args.gold) as f:
        gold = read_gold_tsv(f)
    grid = GridSpec(
        feature_spaces=args.feature_spaces.split(","),
        methods=args.dimreds.split(","),
        clusterers=args.clusterers.split(","),
        sample_sizes=[int(s) for s in args.sample_sizes.split(",")],
        user_counts=[int(s) for s in args.user_counts.split(",")],
        seeds=[int(s) for s in args.seeds.split(",")],
    )
    rows = run_grid(records, gold, grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "grid.md").write_text(grid_markdown(rows) + "\n")
    (out / "grid.json").write_text(grid_json(rows) + "\n")
    print(grid_markdown(rows))
    return 0 if any(r.get("success") for r in rows if r["status"] == "OK") else 1


def cmd_plot(args) -> int:
    users, coords = pl.read_embedding_tsv(Path(args.embedding))
    labels = None
    gold = None
    if args.clusters:
        cusers, labels = pl.read_clusters_tsv(Path(args.clusters))
        order = {u: i for i, u in enumerate(cusers)}
        labels = np.array([labels[order[u]] for u in users])
    if args.gold:
        with open(args.gold) as f:
            gold = read_gold_tsv(f)
    emit_scatter(coords, labels, args.out, gold=gold, users=users)
    print(f"scatter plot written to {args.out}")
    return 0


def cmd_run(args) -> int:
    cfg = build_pipeline_config(args)
    try:
        with open(args.corpus) as f:
            records = parse_tweet_stream(f)
    except OSError as exc:
        print(f"error: cannot read {args.corpus}: {exc}", file=sys.stderr)
        return 2
    gold = None
    if args.gold:
        with open(args.gold) as f:
            gold = read_gold_tsv(f)
    try:
        result = pl.run(records, cfg, gold=gold)
    except pl.PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    out = Path(args.out)
    pl.write_artifacts(result, cfg, out)
    emit_scatter(result.embedding, result.clusters.labels, out / "clusters.svg")
    if result.summary is not None:
        print(json.dumps(result.summary.to_dict(), indent=2, sort_keys=True))
    print(f"artifacts written to {out}/")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stancelab", description="Unsupervised stance detection pipeline"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a tweet JSONL dump and report diagnostics")
    p.add_argument("corpus")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic polarized corpus with gold labels")
    p.add_argument("--sides", type=int, default=2)
    p.add_argument("--users-per-side", type=int, default=500)
    p.add_argument("--accounts-per-side", type=int, default=50)
    p.add_argument("--shared-accounts", type=int, default=0)
    p.add_argument("--hashtags-per-side", type=int, default=20)
    p.add_argument("--zipf-s", type=float, default=0.8)
    p.add_argument("--zipf-max", type=int, default=1000)
    p.add_argument("--cross-retweet-prob", type=float, default=0.05)
    p.add_argument("--outlier-users", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("features", help="build vectors and the similarity matrix")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("embed", help="embed a similarity matrix to 2-D")
    p.add_argument("features", help="output directory of the features stage")
    p.add_argument("--out", required=True)
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("cluster", help="cluster a 2-D embedding")
    p.add_argument("embedding", help="embedding TSV")
    p.add_argument("--out", required=True)
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("label", help="salience report for clusters")
    p.add_argument("corpus")
    p.add_argument("clusters", help="clusters TSV")
    p.add_argument("--out", required=True)
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("eval", help="score clusters against gold labels")
    p.add_argument("clusters", help="clusters TSV")
    p.add_argument("--gold", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="run a configuration grid")
    p.add_argument("corpus")
    p.add_argument("--gold", required=True)
    p.add_argument("--feature-spaces", default="R")
    p.add_argument("--dimreds", default="umap")
    p.add_argument("--clusterers", default="meanshift")
    p.add_argument("--sample-sizes", default="250000")
    p.add_argument("--user-counts", default="1000")
    p.add_argument("--seeds", default="0")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("plot", help="emit an SVG scatter of the embedding")
    p.add_argument("embedding", help="embedding TSV")
    p.add_argument("--clusters", help="clusters TSV for coloring")
    p.add_argument("--gold", help="gold TSV for coloring")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("run", help="run the full pipeline")
    p.add_argument("corpus")
    p.add_argument("--gold")
    p.add_argument("--out", required=True)
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
