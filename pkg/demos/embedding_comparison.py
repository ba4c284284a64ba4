"""Compare the three 2-D embeddings on the same user-similarity matrix.

Builds one small polarized corpus, computes cosine similarities once, then
projects with the force-directed layout, t-SNE, and the UMAP-style layout.
Each projection is clustered with Mean Shift and scored against gold labels;
an SVG scatter per method lands in demos/out/.

Run:  python3 demos/embedding_comparison.py
"""

from pathlib import Path

from stancelab.corpus import EngagedSelection, aggregate_users, select_engaged
from stancelab.density import MeanShiftConfig, mean_shift
from stancelab.embed import EmbedConfig, embed
from stancelab.evaluation import recall_and_success
from stancelab.features import build_vectors, cosine_matrix
from stancelab.plotting import scatter_svg
from stancelab.synth import SynthConfig, generate

records, gold = generate(
    SynthConfig(users_per_side=80, accounts_per_side=15, zipf_max=150,
                cross_retweet_prob=0.08, seed=3)
)
aggregates = aggregate_users(records)
users = select_engaged(aggregates, EngagedSelection(n_top=160, feature_space="R"))
sim = cosine_matrix(build_vectors(aggregates, users, "R"))
print(f"{len(users)} engaged users, similarity matrix computed once\n")

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

print(f"{'method':8} {'clusters':>8} {'purity':>8} {'recall':>8}")
for method in ("fd", "tsne", "umap"):
    cfg = EmbedConfig(method=method, seed=3, tsne_perplexity=20, umap_n_neighbors=10)
    coords = embed(sim, cfg)
    clusters = mean_shift(coords, MeanShiftConfig())
    summary = recall_and_success(clusters.labels, users, gold, len(users))
    print(f"{method:8} {summary.n_clusters:>8} {summary.avg_purity:>8.3f} "
          f"{summary.recall:>8.3f}")
    svg = out_dir / f"{method}.svg"
    svg.write_text(scatter_svg(coords, clusters.labels))
    print(f"{'':8} scatter -> {svg}")
