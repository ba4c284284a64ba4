import io

import numpy as np
import pytest

from stancelab.corpus import aggregate_users, parse_tweet_stream
from stancelab.features import build_vectors, cosine_matrix
from stancelab.synth import NOISE, SynthConfig, generate, read_gold_tsv, write_gold_tsv, write_jsonl


class TestGenerate:
    def test_deterministic(self):
        cfg = SynthConfig(users_per_side=10, accounts_per_side=5, zipf_max=20, seed=3)
        assert generate(cfg) == generate(cfg)

    def test_gold_marginals(self):
        cfg = SynthConfig(
            users_per_side=12, accounts_per_side=5, zipf_max=20, outlier_users=4, seed=1
        )
        _, gold = generate(cfg)
        sides = [v for v in gold.values() if v != NOISE]
        assert len(sides) == 24
        assert sum(1 for v in gold.values() if v == NOISE) == 4
        assert sum(1 for v in gold.values() if v == "side_0") == 12

    def test_disjoint_sides_have_zero_cross_similarity(self):
        cfg = SynthConfig(
            users_per_side=8,
            accounts_per_side=5,
            cross_retweet_prob=0.0,
            shared_accounts=0,
            zipf_max=30,
            seed=2,
        )
        records, gold = generate(cfg)
        aggs = aggregate_users(records)
        users = sorted(aggs)
        vecs = build_vectors(aggs, users, "R")
        sim = cosine_matrix(vecs)
        for i, u in enumerate(users):
            for j, v in enumerate(users):
                if gold[u] != gold[v]:
                    assert sim[i, j] == 0.0

    def test_within_side_similarity_exceeds_cross(self):
        cfg = SynthConfig(
            users_per_side=10, accounts_per_side=5, cross_retweet_prob=0.0, zipf_max=50, seed=4
        )
        records, gold = generate(cfg)
        aggs = aggregate_users(records)
        users = sorted(aggs)
        vecs = build_vectors(aggs, users, "R")
        sim = cosine_matrix(vecs)
        within, cross = [], []
        for i in range(len(users)):
            for j in range(i + 1, len(users)):
                (within if gold[users[i]] == gold[users[j]] else cross).append(sim[i, j])
        assert np.mean(within) > np.mean(cross)
        assert max(cross) == 0.0

    def test_impossible_config_rejected(self):
        with pytest.raises(ValueError):
            SynthConfig(users_per_side=5, accounts_per_side=0)


class TestRoundTrip:
    def test_jsonl_schema_matches_parser(self):
        cfg = SynthConfig(users_per_side=5, accounts_per_side=3, zipf_max=10, seed=6)
        records, _ = generate(cfg)
        buf = io.StringIO()
        write_jsonl(records, buf)
        parsed = parse_tweet_stream(buf.getvalue().splitlines())
        assert parsed == records

    def test_gold_tsv_round_trip(self):
        gold = {"a": "side_0", "b": "side_1", "z": NOISE}
        buf = io.StringIO()
        write_gold_tsv(gold, buf)
        assert read_gold_tsv(buf.getvalue().splitlines()) == gold
