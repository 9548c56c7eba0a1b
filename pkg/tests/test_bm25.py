import math
from collections import Counter

import numpy as np
import pytest

from lcr.bm25 import build_bm25
from lcr.errors import EmptyBatch, MissingGroundTruth
from lcr.tokenizer import tokenize


def oracle_bm25(docs: list[str], query: str, k1=1.2, b=0.75) -> list[float]:
    """Independent dict-based BM25 with the same idf smoothing."""
    tokenized = [[t.norm for t in tokenize(d)] for d in docs]
    n = len(docs)
    avgdl = sum(len(d) for d in tokenized) / n
    tfs = [Counter(d) for d in tokenized]
    df = Counter()
    for tf in tfs:
        df.update(tf.keys())
    scores = []
    q_tokens = [t.norm for t in tokenize(query)]
    for i, tf in enumerate(tfs):
        dl = len(tokenized[i])
        s = 0.0
        for term in q_tokens:
            f = tf.get(term, 0)
            if f == 0:
                continue
            idf = math.log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5))
            s += idf * f * (k1 + 1.0) / (f + k1 * (1 - b + b * dl / avgdl))
        scores.append(s)
    return scores


DOCS = [
    "def read_image(path): return path",
    "class Cache: pass",
    "def merge(left, right): return left + right",
    "read the cache and merge entries",
    "for item in items: process(item)",
    "while running: poll()",
    "def read_cache(): return store",
    "image pixels and buffers",
    "def poll(): return None",
    "entries = [1, 2, 3]",
]


class TestBm25:
    def test_absent_term_scores_all_zero(self):
        index = build_bm25([(f"d{i}", d) for i, d in enumerate(DOCS)])
        assert np.all(index.scores("zzyqx") == 0.0)

    def test_single_document_ranked_first(self):
        index = build_bm25([("only", "the lonely document")])
        result = index.search("lonely", top_k=1)
        assert result.results[0][0] == "only"
        assert result.results[0][1] > 0

    def test_matches_independent_oracle(self):
        index = build_bm25([(f"d{i}", d) for i, d in enumerate(DOCS)])
        for query in ("read cache", "merge entries", "image", "poll running return"):
            got = index.scores(query)
            expected = oracle_bm25(DOCS, query)
            np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_rank_of_with_tie_break(self):
        index = build_bm25([("b", "same text"), ("a", "same text"), ("c", "other")])
        assert index.rank_of("same text", "a") == 1
        assert index.rank_of("same text", "b") == 2
        with pytest.raises(MissingGroundTruth):
            index.rank_of("same", "ghost")

    def test_no_truncation_long_doc(self):
        # Keywords beyond any truncation window still match.
        long_doc = " ".join(f"filler{i}" for i in range(400)) + " uniquemarker token"
        index = build_bm25([("long", long_doc), ("short", "unrelated")])
        assert index.search("uniquemarker", top_k=1).results[0][0] == "long"

    def test_empty_corpus(self):
        with pytest.raises(EmptyBatch):
            build_bm25([])
