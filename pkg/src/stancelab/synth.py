"""Synthetic polarized tweet corpora with known gold stances."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .corpus import TweetRecord

NOISE = "NOISE"


@dataclass
class SynthConfig:
    n_sides: int = 2
    users_per_side: int = 500
    accounts_per_side: int = 50
    shared_accounts: int = 0
    hashtags_per_side: int = 20
    zipf_s: float = 0.8
    zipf_max: int = 1000
    cross_retweet_prob: float = 0.05
    outlier_users: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.n_sides >= 1 and self.users_per_side >= 1 and self.accounts_per_side < 1:
            raise ValueError("need at least one account per side when users exist")
        if not 0 <= self.cross_retweet_prob <= 1:
            raise ValueError("cross_retweet_prob must be in [0, 1]")
        if self.zipf_s <= 0 or self.zipf_max < 1:
            raise ValueError("zipf parameters must be positive")


def _zipf_counts(rng: np.random.Generator, n: int, s: float, kmax: int) -> np.ndarray:
    """Tweet counts drawn from p(k) proportional to k^-s over 1..kmax."""
    k = np.arange(1, kmax + 1, dtype=np.float64)
    p = k**-s
    p /= p.sum()
    return rng.choice(np.arange(1, kmax + 1), size=n, p=p)


def generate(cfg: SynthConfig) -> tuple[list[TweetRecord], dict[str, str]]:
    """Build a polarized corpus plus gold stance labels.

    Every non-outlier user mostly retweets their own side's accounts, crosses over
    with cross_retweet_prob, and hits the shared-account pool in proportion to its
    size. Half of the tweets carry a side hashtag. Outlier users retweet uniformly
    at random across all accounts.
    """
    rng = np.random.default_rng(cfg.seed)
    side_accounts = [
        [f"acct_s{s}_{a}" for a in range(cfg.accounts_per_side)] for s in range(cfg.n_sides)
    ]
    shared = [f"acct_shared_{a}" for a in range(cfg.shared_accounts)]
    all_accounts = [a for accounts in side_accounts for a in accounts] + shared
    side_hashtags = [
        [f"tag_s{s}_{h}" for h in range(cfg.hashtags_per_side)] for s in range(cfg.n_sides)
    ]
    shared_rate = cfg.shared_accounts / (cfg.shared_accounts + cfg.accounts_per_side)

    records: list[TweetRecord] = []
    gold: dict[str, str] = {}
    tweet_seq = 0

    def add_record(uid: str, target: str, hashtag: str | None):
        nonlocal tweet_seq
        tweet_seq += 1
        tags = (hashtag,) if hashtag else ()
        records.append(
            TweetRecord(
                tweet_id=f"t{tweet_seq}",
                author_id=uid,
                author_handle=uid,
                text=f"RT @{target}: post {tweet_seq}",
                retweeted_handle=target,
                hashtags=tags,
            )
        )

    for side in range(cfg.n_sides):
        label = f"side_{side}"
        counts = _zipf_counts(rng, cfg.users_per_side, cfg.zipf_s, cfg.zipf_max)
        for u in range(cfg.users_per_side):
            uid = f"user_s{side}_{u}"
            gold[uid] = label
            for _ in range(int(counts[u])):
                if cfg.n_sides > 1 and rng.random() < cfg.cross_retweet_prob:
                    other = (side + rng.integers(1, cfg.n_sides)) % cfg.n_sides
                    target = side_accounts[other][rng.integers(cfg.accounts_per_side)]
                elif shared and rng.random() < shared_rate:
                    target = shared[rng.integers(len(shared))]
                else:
                    target = side_accounts[side][rng.integers(cfg.accounts_per_side)]
                hashtag = (
                    side_hashtags[side][rng.integers(cfg.hashtags_per_side)]
                    if cfg.hashtags_per_side and rng.random() < 0.5
                    else None
                )
                add_record(uid, target, hashtag)

    if cfg.outlier_users:
        counts = _zipf_counts(rng, cfg.outlier_users, cfg.zipf_s, cfg.zipf_max)
        for u in range(cfg.outlier_users):
            uid = f"user_noise_{u}"
            gold[uid] = NOISE
            for _ in range(int(counts[u])):
                target = all_accounts[rng.integers(len(all_accounts))]
                add_record(uid, target, None)

    return records, gold


def write_jsonl(records: list[TweetRecord], out: TextIO) -> None:
    """Emit the same JSON-Lines schema the ingestion stage reads."""
    for rec in records:
        obj = {
            "id_str": rec.tweet_id,
            "user": {"id_str": rec.author_id, "screen_name": rec.author_handle},
            "full_text": rec.text,
            "entities": {"hashtags": [{"text": t} for t in rec.hashtags]},
        }
        if rec.retweeted_handle:
            obj["retweeted_status"] = {"user": {"screen_name": rec.retweeted_handle}}
        if rec.timestamp:
            obj["created_at"] = rec.timestamp
        out.write(json.dumps(obj, sort_keys=True) + "\n")


def write_gold_tsv(gold: dict[str, str], out: TextIO) -> None:
    for uid in sorted(gold):
        out.write(f"{uid}\t{gold[uid]}\n")


def read_gold_tsv(lines) -> dict[str, str]:
    gold = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        uid, label = line.split("\t")
        gold[uid] = label
    return gold
