"""Hot numeric kernels: segmented attention fusion and BM25 accumulation.

Both kernels run over flattened per-code segments (variable block counts per
code, contiguous ranges into one matrix), which is the inner loop of corpus
encoding, and over term postings, the inner loop of BM25 ranking.

Each kernel has a numba ``@njit`` implementation and a pure-numpy fallback.
Selection happens once at import: numba is used when available unless the
environment variable ``LCR_PURE_NUMPY`` is set to a non-empty value other
than ``0``.  Within either backend the arithmetic order per segment is fixed,
so results are independent of how segments are batched together.
``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

COMBINE_NONE = 0
COMBINE_MEAN = 1
COMBINE_MAX = 2

_FORCE_NUMPY = os.environ.get("LCR_PURE_NUMPY", "0") not in ("", "0")

try:  # pragma: no cover - exercised via backend selection
    from numba import njit

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover
    _HAS_NUMBA = False


# ----------------------------------------------------------------------
# Pure-numpy implementations
# ----------------------------------------------------------------------


def segment_attention_numpy(
    flat: np.ndarray, starts: np.ndarray, logits: np.ndarray, combine: int
) -> tuple[np.ndarray, np.ndarray]:
    """Softmax the logits within each segment and fuse block rows.

    ``flat`` is (B, D); ``starts`` has S+1 offsets delimiting segments;
    returns the (S, D) fused matrix and the (B,) per-block weights.
    """
    n_seg = starts.shape[0] - 1
    fused = np.empty((n_seg, flat.shape[1]), dtype=np.float64)
    alphas = np.empty(flat.shape[0], dtype=np.float64)
    for s in range(n_seg):
        lo, hi = starts[s], starts[s + 1]
        seg = flat[lo:hi]
        z = np.exp(logits[lo:hi] - logits[lo:hi].max())
        a = z / z.sum()
        alphas[lo:hi] = a
        acc = a @ seg
        if combine == COMBINE_MEAN:
            acc = acc + seg.mean(axis=0)
        elif combine == COMBINE_MAX:
            acc = acc + seg.max(axis=0)
        fused[s] = acc
    return fused, alphas


def segment_pool_numpy(flat: np.ndarray, starts: np.ndarray, mode: int) -> np.ndarray:
    """Element-wise mean (mode=1) or max (mode=2) within each segment."""
    n_seg = starts.shape[0] - 1
    out = np.empty((n_seg, flat.shape[1]), dtype=np.float64)
    for s in range(n_seg):
        seg = flat[starts[s] : starts[s + 1]]
        out[s] = seg.mean(axis=0) if mode == COMBINE_MEAN else seg.max(axis=0)
    return out


def attn_logits_one_numpy(flat: np.ndarray, w2: np.ndarray, b2: float) -> np.ndarray:
    """One-layer attention scores, one row at a time.

    Rows are scored independently on purpose: a whole-matrix gemv can round
    row dots differently depending on the matrix shape, which would make
    scores depend on how snippets were batched.
    """
    out = np.empty(flat.shape[0], dtype=np.float64)
    for i in range(flat.shape[0]):
        out[i] = float(flat[i] @ w2) + b2
    return out


def attn_logits_two_numpy(
    flat: np.ndarray, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: float
) -> np.ndarray:
    """Two-layer (tanh) attention scores, row-independent like the one-layer."""
    out = np.empty(flat.shape[0], dtype=np.float64)
    for i in range(flat.shape[0]):
        hidden = np.tanh(flat[i] @ w1 + b1)
        out[i] = float(hidden @ w2) + b2
    return out


def bm25_accumulate_numpy(
    doc_ids: np.ndarray,
    tfs: np.ndarray,
    idfs: np.ndarray,
    denom_base: np.ndarray,
    k1: float,
) -> np.ndarray:
    """Sum per-term contributions into a dense score vector.

    ``doc_ids/tfs/idfs`` are parallel postings entries (concatenated over the
    query's terms); ``denom_base[d] = k1 * (1 - b + b * dl_d / avgdl)``.
    """
    scores = np.zeros(denom_base.shape[0], dtype=np.float64)
    contrib = idfs * tfs * (k1 + 1.0) / (tfs + denom_base[doc_ids])
    np.add.at(scores, doc_ids, contrib)
    return scores


# ----------------------------------------------------------------------
# Numba implementations
# ----------------------------------------------------------------------

if _HAS_NUMBA:

    @njit(cache=True)
    def _segment_attention_numba(flat, starts, logits, combine):
        n_seg = starts.shape[0] - 1
        dim = flat.shape[1]
        fused = np.zeros((n_seg, dim), dtype=np.float64)
        alphas = np.empty(flat.shape[0], dtype=np.float64)
        for s in range(n_seg):
            lo, hi = starts[s], starts[s + 1]
            m = logits[lo]
            for i in range(lo + 1, hi):
                if logits[i] > m:
                    m = logits[i]
            z = 0.0
            for i in range(lo, hi):
                e = np.exp(logits[i] - m)
                alphas[i] = e
                z += e
            for i in range(lo, hi):
                alphas[i] /= z
            for i in range(lo, hi):
                a = alphas[i]
                for d in range(dim):
                    fused[s, d] += a * flat[i, d]
            if combine == 1:
                inv = 1.0 / (hi - lo)
                for d in range(dim):
                    acc = 0.0
                    for i in range(lo, hi):
                        acc += flat[i, d]
                    fused[s, d] += acc * inv
            elif combine == 2:
                for d in range(dim):
                    mx = flat[lo, d]
                    for i in range(lo + 1, hi):
                        if flat[i, d] > mx:
                            mx = flat[i, d]
                    fused[s, d] += mx
        return fused, alphas

    @njit(cache=True)
    def _segment_pool_numba(flat, starts, mode):
        n_seg = starts.shape[0] - 1
        dim = flat.shape[1]
        out = np.zeros((n_seg, dim), dtype=np.float64)
        for s in range(n_seg):
            lo, hi = starts[s], starts[s + 1]
            if mode == 1:
                inv = 1.0 / (hi - lo)
                for d in range(dim):
                    acc = 0.0
                    for i in range(lo, hi):
                        acc += flat[i, d]
                    out[s, d] = acc * inv
            else:
                for d in range(dim):
                    mx = flat[lo, d]
                    for i in range(lo + 1, hi):
                        if flat[i, d] > mx:
                            mx = flat[i, d]
                    out[s, d] = mx
        return out

    @njit(cache=True)
    def _attn_logits_one_numba(flat, w2, b2):
        out = np.empty(flat.shape[0], dtype=np.float64)
        for i in range(flat.shape[0]):
            acc = 0.0
            for d in range(flat.shape[1]):
                acc += flat[i, d] * w2[d]
            out[i] = acc + b2
        return out

    @njit(cache=True)
    def _attn_logits_two_numba(flat, w1, b1, w2, b2):
        n_rows, dim = flat.shape
        hidden_dim = w1.shape[1]
        out = np.empty(n_rows, dtype=np.float64)
        for i in range(n_rows):
            score = 0.0
            for h in range(hidden_dim):
                acc = b1[h]
                for d in range(dim):
                    acc += flat[i, d] * w1[d, h]
                score += np.tanh(acc) * w2[h]
            out[i] = score + b2
        return out

    @njit(cache=True)
    def _bm25_accumulate_numba(doc_ids, tfs, idfs, denom_base, k1):
        scores = np.zeros(denom_base.shape[0], dtype=np.float64)
        for i in range(doc_ids.shape[0]):
            d = doc_ids[i]
            tf = tfs[i]
            scores[d] += idfs[i] * tf * (k1 + 1.0) / (tf + denom_base[d])
        return scores

    def segment_attention_numba(flat, starts, logits, combine):
        return _segment_attention_numba(
            np.ascontiguousarray(flat), starts, np.ascontiguousarray(logits), combine
        )

    def segment_pool_numba(flat, starts, mode):
        return _segment_pool_numba(np.ascontiguousarray(flat), starts, mode)

    def attn_logits_one_numba(flat, w2, b2):
        return _attn_logits_one_numba(
            np.ascontiguousarray(flat), np.ascontiguousarray(w2), b2
        )

    def attn_logits_two_numba(flat, w1, b1, w2, b2):
        return _attn_logits_two_numba(
            np.ascontiguousarray(flat),
            np.ascontiguousarray(w1),
            np.ascontiguousarray(b1),
            np.ascontiguousarray(w2),
            b2,
        )

    def bm25_accumulate_numba(doc_ids, tfs, idfs, denom_base, k1):
        return _bm25_accumulate_numba(doc_ids, tfs, idfs, denom_base, k1)


# ----------------------------------------------------------------------
# Backend selection
# ----------------------------------------------------------------------

if _HAS_NUMBA and not _FORCE_NUMPY:
    BACKEND = "numba"
    segment_attention = segment_attention_numba
    segment_pool = segment_pool_numba
    attn_logits_one = attn_logits_one_numba
    attn_logits_two = attn_logits_two_numba
    bm25_accumulate = bm25_accumulate_numba
else:
    BACKEND = "numpy"
    if _FORCE_NUMPY:
        logger.info("LCR_PURE_NUMPY set; using pure-numpy kernels")
    else:
        logger.info("numba unavailable; using pure-numpy kernels")
    segment_attention = segment_attention_numpy
    segment_pool = segment_pool_numpy
    attn_logits_one = attn_logits_one_numpy
    attn_logits_two = attn_logits_two_numpy
    bm25_accumulate = bm25_accumulate_numpy


def active_backend() -> str:
    return BACKEND
