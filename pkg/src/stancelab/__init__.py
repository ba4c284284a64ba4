"""Unsupervised stance detection: similarity features, 2-D embedding, peak clustering."""

__version__ = "0.1.0"

from .corpus import (
    EngagedSelection,
    PropagationRule,
    TweetRecord,
    UserAggregate,
    aggregate_users,
    parse_tweet_stream,
    propagate_labels,
    sample_tweets,
    select_engaged,
)
from .density import (
    OUTLIER,
    ClusterLabels,
    DbscanConfig,
    MeanShiftConfig,
    dbscan,
    estimate_bandwidth,
    mean_shift,
)
from .embed import EmbedConfig, embed, embed_fd, embed_tsne, embed_umap, rescale
from .evaluation import EvalSummary, GridSpec, purity, recall_and_success, run_grid
from .features import build_vectors, cosine_matrix
from .salience import SalienceEntry, salience_for_kind, salience_report, valence
from .synth import SynthConfig, generate

__all__ = [
    "__version__",
    "TweetRecord",
    "UserAggregate",
    "EngagedSelection",
    "PropagationRule",
    "parse_tweet_stream",
    "aggregate_users",
    "select_engaged",
    "sample_tweets",
    "propagate_labels",
    "build_vectors",
    "cosine_matrix",
    "EmbedConfig",
    "embed",
    "embed_fd",
    "embed_tsne",
    "embed_umap",
    "rescale",
    "OUTLIER",
    "ClusterLabels",
    "MeanShiftConfig",
    "DbscanConfig",
    "estimate_bandwidth",
    "mean_shift",
    "dbscan",
    "valence",
    "SalienceEntry",
    "salience_for_kind",
    "salience_report",
    "EvalSummary",
    "GridSpec",
    "purity",
    "recall_and_success",
    "run_grid",
    "SynthConfig",
    "generate",
]
