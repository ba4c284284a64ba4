"""Tweet ingestion, per-user aggregation, engaged-user selection and label propagation."""

from __future__ import annotations

import json
import re
import sys
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

RT_PREFIX = re.compile(r"^RT @([A-Za-z0-9_]+):\s*")
_WS = re.compile(r"\s+")


@dataclass(frozen=True)
class TweetRecord:
    """One tweet: author, optional retweeted account, hashtags."""

    tweet_id: str
    author_id: str
    author_handle: str
    text: str
    retweeted_handle: Optional[str] = None
    hashtags: tuple[str, ...] = ()
    timestamp: Optional[str] = None


@dataclass
class UserAggregate:
    """Per-user interaction counts over the raw observables."""

    user_id: str
    tweet_count: int = 0
    retweet_counts: Counter = field(default_factory=Counter)
    hashtag_counts: Counter = field(default_factory=Counter)
    tweet_text_counts: Counter = field(default_factory=Counter)


@dataclass(frozen=True)
class EngagedSelection:
    n_top: int = 1000
    min_interactions: int = 5
    feature_space: str = "R"

    def __post_init__(self):
        if self.n_top < 1:
            raise ValueError("n_top must be >= 1")
        if self.min_interactions < 1:
            raise ValueError("min_interactions must be >= 1")


@dataclass(frozen=True)
class PropagationRule:
    """Single-iteration threshold label propagation from seed users."""

    seed_labels: Mapping[str, str]
    per_label_threshold: Mapping[str, int]
    forbid_cross: bool = True

    def __post_init__(self):
        for lab, t in self.per_label_threshold.items():
            if t < 1:
                raise ValueError(f"threshold for {lab!r} must be >= 1")


def normalize_text(text: str) -> str:
    """Strip a leading ``RT @handle:`` and collapse whitespace, so retweet copies collide."""
    return _WS.sub(" ", RT_PREFIX.sub("", text)).strip()


def parse_tweet_stream(
    lines: Iterable[str], stats: Optional[dict] = None
) -> list[TweetRecord]:
    """Parse a JSON-Lines tweet dump into TweetRecords.

    Malformed lines and tweets without an author id are skipped; skip counts go to
    `stats` (if given) and a one-line summary to stderr.
    """
    records: list[TweetRecord] = []
    skipped_json = 0
    skipped_author = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except (json.JSONDecodeError, UnicodeDecodeError):
            skipped_json += 1
            continue
        if not isinstance(obj, dict):
            skipped_json += 1
            continue
        user = obj.get("user") or {}
        author_id = str(user.get("id_str") or user.get("id") or "")
        if not author_id:
            skipped_author += 1
            continue
        tweet_id = str(obj.get("id_str") or obj.get("id") or "")
        handle = str(user.get("screen_name") or "").lower()
        text = obj.get("full_text") or obj.get("text") or ""

        retweeted = None
        rs = obj.get("retweeted_status")
        if isinstance(rs, dict):
            rh = (rs.get("user") or {}).get("screen_name")
            if rh:
                retweeted = str(rh).lower()
        if retweeted is None:
            m = RT_PREFIX.match(text)
            if m:
                retweeted = m.group(1).lower()

        hashtags = []
        for h in (obj.get("entities") or {}).get("hashtags") or []:
            tag = h.get("text") if isinstance(h, dict) else h
            if tag:
                hashtags.append(str(tag).lstrip("#").lower())

        records.append(
            TweetRecord(
                tweet_id=tweet_id,
                author_id=author_id,
                author_handle=handle,
                text=text,
                retweeted_handle=retweeted,
                hashtags=tuple(hashtags),
                timestamp=obj.get("created_at"),
            )
        )
    if stats is not None:
        stats["skipped_malformed"] = skipped_json
        stats["skipped_no_author"] = skipped_author
        stats["parsed"] = len(records)
    if skipped_json or skipped_author:
        print(
            f"parse_tweet_stream: skipped {skipped_json} malformed line(s), "
            f"{skipped_author} without author id",
            file=sys.stderr,
        )
    return records


def aggregate_users(records: Sequence[TweetRecord]) -> dict[str, UserAggregate]:
    """Count tweets, retweeted accounts, hashtags and normalized texts per user."""
    aggs: dict[str, UserAggregate] = {}
    for rec in records:
        agg = aggs.get(rec.author_id)
        if agg is None:
            agg = aggs[rec.author_id] = UserAggregate(user_id=rec.author_id)
        agg.tweet_count += 1
        agg.tweet_text_counts[normalize_text(rec.text)] += 1
        if rec.retweeted_handle:
            agg.retweet_counts[rec.retweeted_handle] += 1
        for tag in rec.hashtags:
            agg.hashtag_counts[tag] += 1
    return aggs


def interaction_count(agg: UserAggregate, space: str) -> int:
    """Interactions of one user inside a feature space (max over blocks for TRH)."""
    r = sum(agg.retweet_counts.values())
    h = sum(agg.hashtag_counts.values())
    t = agg.tweet_count
    if space == "R":
        return r
    if space == "H":
        return h
    if space == "T":
        return t
    if space == "TRH":
        return max(r, h, t)
    raise ValueError(f"unknown feature space {space!r}")


def select_engaged(
    aggregates: Mapping[str, UserAggregate], sel: EngagedSelection
) -> list[str]:
    """Top-n users by tweet count among those with enough interactions in the space.

    Ties broken by user_id ascending; may return fewer than n_top.
    """
    eligible = [
        uid
        for uid, agg in aggregates.items()
        if interaction_count(agg, sel.feature_space) >= sel.min_interactions
    ]
    eligible.sort(key=lambda uid: (-aggregates[uid].tweet_count, uid))
    return eligible[: sel.n_top]


def sample_tweets(
    records: Sequence[TweetRecord], size: int, seed: int
) -> list[TweetRecord]:
    """Uniform sample without replacement, deterministic per seed, input order kept."""
    if size < 0:
        raise ValueError("size must be >= 0")
    if size >= len(records):
        return list(records)
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(records), size=size, replace=False)
    idx.sort()
    return [records[i] for i in idx]


def propagate_labels(
    records: Sequence[TweetRecord], rule: PropagationRule
) -> dict[str, str]:
    """One iteration of retweet-based label propagation from seed users.

    A user gets label L when they retweeted at least per_label_threshold[L] tweets
    that a seed user of L authored or retweeted, and (forbid_cross) zero tweets from
    any other label's side. Seed users always keep their seed label.
    """
    labels = set(rule.seed_labels.values())
    if len(labels) < 2:
        raise ValueError("seed labels must cover at least 2 distinct labels")

    # Texts each side authored or retweeted, keyed on normalized text.
    side_texts: dict[str, set[str]] = {lab: set() for lab in labels}
    for rec in records:
        lab = rule.seed_labels.get(rec.author_id)
        if lab is not None:
            side_texts[lab].add(normalize_text(rec.text))

    side_counts: dict[str, Counter] = defaultdict(Counter)
    for rec in records:
        if rec.retweeted_handle is None:
            continue
        text = normalize_text(rec.text)
        for lab in labels:
            if text in side_texts[lab]:
                side_counts[rec.author_id][lab] += 1

    out: dict[str, str] = dict(rule.seed_labels)
    conflicts = 0
    for uid, counts in side_counts.items():
        if uid in rule.seed_labels:
            continue
        qualifying = [
            lab
            for lab in labels
            if counts[lab] >= rule.per_label_threshold.get(lab, 1)
            and (not rule.forbid_cross or all(counts[o] == 0 for o in labels if o != lab))
        ]
        if len(qualifying) == 1:
            out[uid] = qualifying[0]
        elif len(qualifying) > 1:
            conflicts += 1
    if conflicts:
        print(f"propagate_labels: {conflicts} user(s) matched multiple labels", file=sys.stderr)
    return out
