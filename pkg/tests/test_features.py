import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stancelab.corpus import UserAggregate
from stancelab.features import build_vectors, cosine_matrix, dump_matrix_tsv, dump_vectors_tsv

from collections import Counter


def agg(uid, retweets=None, hashtags=None, texts=None, tweet_count=0):
    a = UserAggregate(user_id=uid, tweet_count=tweet_count)
    a.retweet_counts = Counter(retweets or {})
    a.hashtag_counts = Counter(hashtags or {})
    a.tweet_text_counts = Counter(texts or {})
    return a


class TestBuildVectors:
    def test_relative_frequency(self):
        aggs = {"u": agg("u", retweets={"a": 5, "b": 100, "c": 895})}
        [vec] = build_vectors(aggs, ["u"], "R")
        assert vec == {"a": 0.005, "b": 0.100, "c": 0.895}

    def test_single_account(self):
        aggs = {"u": agg("u", retweets={"a": 7})}
        [vec] = build_vectors(aggs, ["u"], "R")
        assert vec == {"a": 1.0}

    def test_trh_blocks_normalized_independently(self):
        aggs = {
            "u": agg(
                "u",
                retweets={"x": 2},
                hashtags={"a": 1},
                texts={"RT @x: hi": 2},
                tweet_count=2,
            )
        }
        [vec] = build_vectors(aggs, ["u"], "TRH")
        assert vec["r:x"] == 1.0
        assert vec["h:a"] == 1.0
        assert vec["t:RT @x: hi"] == 1.0

    def test_zero_vector_flagged(self, capsys):
        aggs = {"u": agg("u")}
        [vec] = build_vectors(aggs, ["u"], "R")
        assert vec == {}
        assert "empty" in capsys.readouterr().err

    def test_scale_invariance(self):
        a1 = {"u": agg("u", retweets={"a": 3, "b": 7})}
        a2 = {"u": agg("u", retweets={"a": 30, "b": 70})}
        v1 = build_vectors(a1, ["u"], "R")[0]
        v2 = build_vectors(a2, ["u"], "R")[0]
        assert v1 == pytest.approx(v2)

    def test_blocks_sum_to_one(self):
        aggs = {"u": agg("u", retweets={"a": 3, "b": 9}, hashtags={"h": 2, "g": 5})}
        [vec] = build_vectors(aggs, ["u"], "TRH")
        r_sum = sum(w for f, w in vec.items() if f.startswith("r:"))
        h_sum = sum(w for f, w in vec.items() if f.startswith("h:"))
        assert r_sum == pytest.approx(1.0, abs=1e-9)
        assert h_sum == pytest.approx(1.0, abs=1e-9)


class TestCosineMatrix:
    def test_identical_vectors(self):
        sim = cosine_matrix([{"a": 0.3, "b": 0.7}, {"a": 0.3, "b": 0.7}])
        assert sim[0, 1] == pytest.approx(1.0)

    def test_disjoint_supports(self):
        sim = cosine_matrix([{"a": 1.0}, {"b": 1.0}])
        assert sim[0, 1] == 0.0

    def test_hand_value(self):
        sim = cosine_matrix([{"a": 0.5, "b": 0.5}, {"a": 1.0}])
        assert sim[0, 1] == pytest.approx(0.5 / math.sqrt(0.5), abs=1e-9)

    def test_zero_vector_convention(self):
        sim = cosine_matrix([{}, {"a": 1.0}])
        assert sim[0, 0] == 1.0
        assert sim[0, 1] == 0.0

    def test_symmetric_unit_diagonal(self):
        rng = np.random.default_rng(0)
        vectors = []
        for _ in range(12):
            keys = rng.choice(20, size=rng.integers(1, 6), replace=False)
            w = rng.random(len(keys))
            w /= w.sum()
            vectors.append({f"f{k}": x for k, x in zip(keys, w)})
        sim = cosine_matrix(vectors)
        assert np.allclose(sim, sim.T)
        assert np.allclose(np.diag(sim), 1.0)
        assert sim.min() >= 0.0 and sim.max() <= 1.0

    def test_matches_dense_brute_force(self):
        rng = np.random.default_rng(1)
        n, d = 15, 12
        dense = rng.random((n, d)) * (rng.random((n, d)) < 0.4)
        vectors = [
            {f"f{j}": dense[i, j] for j in range(d) if dense[i, j] > 0} for i in range(n)
        ]
        sim = cosine_matrix(vectors)
        for i in range(n):
            for j in range(n):
                ni, nj = np.linalg.norm(dense[i]), np.linalg.norm(dense[j])
                if ni == 0 or nj == 0:
                    expected = 1.0 if i == j else 0.0
                else:
                    expected = dense[i] @ dense[j] / (ni * nj) if i != j else 1.0
                assert sim[i, j] == pytest.approx(expected, abs=1e-12)

    def test_trh_hashtag_overlap_positive(self):
        aggs = {
            "u": agg("u", retweets={"x": 1}, hashtags={"shared": 1}),
            "v": agg("v", retweets={"y": 1}, hashtags={"shared": 1}),
            "w": agg("w", retweets={"z": 1}, hashtags={"other": 1}),
        }
        vecs = build_vectors(aggs, ["u", "v", "w"], "TRH")
        sim = cosine_matrix(vecs)
        assert sim[0, 1] > 0.0
        assert sim[0, 2] == 0.0


def test_tsv_dumps():
    users = ["u1", "u2"]
    vectors = [{"a": 0.5, "b": 0.5}, {"a": 1.0}]
    buf = io.StringIO()
    dump_vectors_tsv(users, vectors, buf)
    assert buf.getvalue().splitlines()[0] == "u1\ta\t0.5"
    sim = cosine_matrix(vectors)
    buf = io.StringIO()
    dump_matrix_tsv(users, sim, buf)
    assert buf.getvalue().count("\n") == 1  # upper triangle of a 2x2
