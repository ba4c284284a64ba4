"""Valence scoring and per-cluster salience rankings of retweeted accounts and hashtags."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import TweetRecord
from .density import OUTLIER

KINDS = ("retweeted_account", "hashtag")


@dataclass(frozen=True)
class SalienceEntry:
    element: str
    kind: str
    tf: int
    valence: float
    score: float


def valence(tf_a: int, total_a: int, tf_not_a: int, total_not_a: int) -> float:
    """Exclusivity of an element to cluster A, in [-1, 1].

    V = 2 * rate_A / (rate_A + rate_notA) - 1 with rate = tf / total. An empty
    complement counts as rate 0, so a present element scores 1.
    """
    if total_a <= 0:
        raise ValueError("total_a must be positive")
    if tf_a == 0 and tf_not_a == 0:
        raise ValueError("valence undefined when the element occurs nowhere")
    rate_a = tf_a / total_a
    rate_not_a = tf_not_a / total_not_a if total_not_a > 0 else 0.0
    return 2.0 * rate_a / (rate_a + rate_not_a) - 1.0


def _element_counts(rec: TweetRecord, kind: str) -> list[str]:
    if kind == "retweeted_account":
        return [rec.retweeted_handle] if rec.retweeted_handle else []
    if kind == "hashtag":
        return list(rec.hashtags)
    raise ValueError(f"unknown kind {kind!r}")


def salience_for_kind(
    records: Sequence[TweetRecord],
    cluster_of_user: Mapping[str, int],
    kind: str,
    v_threshold: float = 0.8,
    top_k: int = 5,
) -> dict[int, list[SalienceEntry]]:
    """Top elements per cluster by tf * valence, keeping only valence >= threshold.

    Only records by clustered (non-outlier) users are tallied. Ties broken by
    element string ascending.
    """
    tallies: dict[int, Counter] = defaultdict(Counter)
    for rec in records:
        cluster = cluster_of_user.get(rec.author_id, OUTLIER)
        if cluster == OUTLIER:
            continue
        for element in _element_counts(rec, kind):
            tallies[cluster][element] += 1

    totals = {c: sum(t.values()) for c, t in tallies.items()}
    grand_total = sum(totals.values())
    clusters = sorted(set(c for c in cluster_of_user.values() if c != OUTLIER))

    report: dict[int, list[SalienceEntry]] = {}
    for cluster in clusters:
        tally = tallies.get(cluster, Counter())
        total_a = totals.get(cluster, 0)
        total_not_a = grand_total - total_a
        entries = []
        for element, tf_a in tally.items():
            tf_not_a = sum(tallies[c][element] for c in tallies if c != cluster)
            v = valence(tf_a, total_a, tf_not_a, total_not_a)
            if v >= v_threshold:
                entries.append(
                    SalienceEntry(element=element, kind=kind, tf=tf_a, valence=v, score=tf_a * v)
                )
        entries.sort(key=lambda e: (-e.score, e.element))
        report[cluster] = entries[:top_k]
    return report


def salience_report(
    records: Sequence[TweetRecord],
    cluster_of_user: Mapping[str, int],
    v_threshold: float = 0.8,
    top_k: int = 5,
) -> dict:
    """JSON-ready report: both kinds for every non-outlier cluster."""
    accounts = salience_for_kind(records, cluster_of_user, "retweeted_account", v_threshold, top_k)
    hashtags = salience_for_kind(records, cluster_of_user, "hashtag", v_threshold, top_k)
    out = {}
    for cluster in sorted(set(accounts) | set(hashtags)):
        out[str(cluster)] = {
            "retweeted_accounts": [
                {"element": e.element, "tf": e.tf, "valence": e.valence, "score": e.score}
                for e in accounts.get(cluster, [])
            ],
            "hashtags": [
                {"element": e.element, "tf": e.tf, "valence": e.valence, "score": e.score}
                for e in hashtags.get(cluster, [])
            ],
        }
    return out


def format_report(report: dict) -> str:
    """Aligned plain-text rendering of the salience report."""
    lines = []
    for cluster in sorted(report, key=int):
        lines.append(f"Cluster {cluster}")
        for kind_key, title in (
            ("retweeted_accounts", "Salient retweeted accounts"),
            ("hashtags", "Salient hashtags"),
        ):
            lines.append(f"  {title}:")
            entries = report[cluster][kind_key]
            if not entries:
                lines.append("    (none)")
                continue
            width = max(len(e["element"]) for e in entries)
            for e in entries:
                lines.append(
                    f"    {e['element']:<{width}}  tf={e['tf']:<6d} "
                    f"V={e['valence']:.3f}  score={e['score']:.1f}"
                )
        lines.append("")
    return "\n".join(lines)
