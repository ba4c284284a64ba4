"""Per-user relative-frequency vectors and the pairwise cosine-similarity matrix."""

from __future__ import annotations

import sys
from typing import Mapping, Sequence, TextIO

import numpy as np
import scipy.sparse as sp

from .corpus import UserAggregate

FEATURE_SPACES = ("T", "R", "H", "TRH")


def _normalized_block(counts: Mapping[str, int], prefix: str) -> dict[str, float]:
    total = sum(counts.values())
    if total == 0:
        return {}
    return {prefix + k: v / total for k, v in counts.items()}


def build_vectors(
    aggregates: Mapping[str, UserAggregate],
    users: Sequence[str],
    space: str,
) -> list[dict[str, float]]:
    """Relative-frequency vector per user, one dict of feature_id -> weight.

    For TRH the T/R/H blocks are normalized independently and concatenated with
    namespaced feature ids, so each non-empty block sums to 1 on its own. Users with
    no interactions in the space come back as empty dicts (flagged on stderr).
    """
    if space not in FEATURE_SPACES:
        raise ValueError(f"unknown feature space {space!r}")
    vectors: list[dict[str, float]] = []
    n_zero = 0
    for uid in users:
        agg = aggregates[uid]
        if space == "T":
            vec = _normalized_block(agg.tweet_text_counts, "")
        elif space == "R":
            vec = _normalized_block(agg.retweet_counts, "")
        elif space == "H":
            vec = _normalized_block(agg.hashtag_counts, "")
        else:
            vec = _normalized_block(agg.tweet_text_counts, "t:")
            vec.update(_normalized_block(agg.retweet_counts, "r:"))
            vec.update(_normalized_block(agg.hashtag_counts, "h:"))
        if not vec:
            n_zero += 1
        vectors.append(vec)
    if n_zero:
        print(f"build_vectors: {n_zero} user(s) with empty {space} vector", file=sys.stderr)
    return vectors


def cosine_matrix(vectors: Sequence[Mapping[str, float]]) -> np.ndarray:
    """Dense symmetric cosine-similarity matrix with unit diagonal.

    Zero vectors get similarity 0 to everything and 1 to themselves.
    """
    n = len(vectors)
    if n < 1:
        raise ValueError("need at least one vector")
    feature_ids = sorted({f for vec in vectors for f in vec})
    col = {f: j for j, f in enumerate(feature_ids)}

    rows, cols, vals = [], [], []
    for i, vec in enumerate(vectors):
        for f in sorted(vec):
            rows.append(i)
            cols.append(col[f])
            vals.append(vec[f])
    x = sp.csr_matrix(
        (vals, (rows, cols)), shape=(n, max(1, len(feature_ids))), dtype=np.float64
    )
    norms = np.sqrt(x.multiply(x).sum(axis=1)).A1
    inv = np.where(norms > 0, 1.0 / np.where(norms > 0, norms, 1.0), 0.0)
    xn = sp.diags(inv) @ x
    sim = np.asarray((xn @ xn.T).todense(), dtype=np.float64)
    np.clip(sim, 0.0, 1.0, out=sim)
    np.fill_diagonal(sim, 1.0)
    sim = (sim + sim.T) / 2.0
    return sim


def dump_vectors_tsv(
    users: Sequence[str], vectors: Sequence[Mapping[str, float]], out: TextIO
) -> None:
    for uid, vec in zip(users, vectors):
        for f in sorted(vec):
            out.write(f"{uid}\t{f}\t{vec[f]:.10g}\n")


def dump_matrix_tsv(users: Sequence[str], sim: np.ndarray, out: TextIO) -> None:
    """Upper-triangle dump for debugging."""
    n = len(users)
    for i in range(n):
        for j in range(i + 1, n):
            out.write(f"{users[i]}\t{users[j]}\t{sim[i, j]:.6f}\n")
