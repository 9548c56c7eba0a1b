"""Okapi BM25 baseline over full, untruncated code text.

Lexical matching has no length ceiling, which is exactly why it is the
reference point for long-code retrieval.  Documents are tokenized with the
same code tokenizer as the dense pipeline; postings are stored as flat int
arrays so scoring is one kernel pass.  The idf uses the non-negative
ln(1 + (N - df + 0.5)/(df + 0.5)) smoothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyBatch, MissingGroundTruth
from .index import SearchResult
from .tokenizer import tokenize

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


@dataclass
class Bm25Index:
    ids: list[str]
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    postings: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    idf: dict[str, float] = field(default_factory=dict)
    denom_base: np.ndarray = field(default_factory=lambda: np.zeros(0))
    _row_of: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ids)

    def scores(self, query: str) -> np.ndarray:
        """BM25 score of every document for the query token multiset."""
        doc_chunks: list[np.ndarray] = []
        tf_chunks: list[np.ndarray] = []
        idf_chunks: list[np.ndarray] = []
        for tok in tokenize(query):
            entry = self.postings.get(tok.norm)
            if entry is None:
                continue
            docs, tfs = entry
            doc_chunks.append(docs)
            tf_chunks.append(tfs)
            idf_chunks.append(np.full(docs.shape[0], self.idf[tok.norm]))
        if not doc_chunks:
            return np.zeros(len(self.ids), dtype=np.float64)
        return _kernels.bm25_accumulate(
            np.concatenate(doc_chunks),
            np.concatenate(tf_chunks),
            np.concatenate(idf_chunks),
            self.denom_base,
            self.k1,
        )

    def search(self, query: str, top_k: int = 10, gt_id: str | None = None) -> SearchResult:
        scores = self.scores(query)
        order = sorted(range(len(self.ids)), key=lambda i: (-scores[i], self.ids[i]))
        k = min(top_k, len(order)) if top_k > 0 else len(order)
        results = [(self.ids[i], float(scores[i])) for i in order[:k]]
        gt_rank = self.rank_of(query, gt_id, scores) if gt_id is not None else None
        return SearchResult(results=results, gt_rank=gt_rank)

    def rank_of(self, query: str, gt_id: str, scores: np.ndarray | None = None) -> int:
        if gt_id not in self._row_of:
            raise MissingGroundTruth(gt_id)
        if scores is None:
            scores = self.scores(query)
        row = self._row_of[gt_id]
        gt_score = scores[row]
        better = int(np.sum(scores > gt_score))
        tied_before = sum(
            1 for i in np.flatnonzero(scores == gt_score) if self.ids[int(i)] < gt_id
        )
        return 1 + better + tied_before


def build_bm25(
    docs: list[tuple[str, str]], k1: float = DEFAULT_K1, b: float = DEFAULT_B
) -> Bm25Index:
    """Index (id, text) documents; text is used whole, never truncated."""
    if not docs:
        raise EmptyBatch("no documents for BM25")
    ids = [doc_id for doc_id, _ in docs]
    n = len(docs)
    doc_lens = np.zeros(n, dtype=np.float64)
    freq_by_term: dict[str, dict[int, int]] = {}
    for row, (_doc_id, text) in enumerate(docs):
        toks = tokenize(text)
        doc_lens[row] = len(toks)
        for t in toks:
            freq_by_term.setdefault(t.norm, {})
            freq_by_term[t.norm][row] = freq_by_term[t.norm].get(row, 0) + 1
    avgdl = float(doc_lens.mean()) if doc_lens.sum() > 0 else 1.0
    index = Bm25Index(
        ids=ids,
        k1=k1,
        b=b,
        denom_base=k1 * (1.0 - b + b * doc_lens / avgdl),
        _row_of={doc_id: i for i, doc_id in enumerate(ids)},
    )
    for term, by_doc in freq_by_term.items():
        rows = np.array(sorted(by_doc), dtype=np.int64)
        tfs = np.array([by_doc[r] for r in rows], dtype=np.float64)
        index.postings[term] = (rows, tfs)
        df = len(by_doc)
        index.idf[term] = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
    return index
