"""Training the fusion attention head on (query, code) pairs.

Only the attention parameters learn; block and query embeddings are
precomputed with a frozen encoder.  The objective is in-batch contrastive:
cosine similarities between every query and every fused code in the batch,
scaled by a temperature, cross-entropy against the matching pair.  Gradients
flow analytically through the cosine normalization, the fusion combination,
and the attention softmax; plain SGD applies them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, NonFiniteLoss, ZeroVector
from .fusion import (
    FusionParams,
    attention_logits,
    combine_mode,
    is_attention,
    is_two_layer,
)

logger = logging.getLogger(__name__)

DEFAULT_TEMPERATURE = 0.05


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 64
    max_blocks_per_code: int = 6
    epochs: int = 10
    learning_rate: float = 0.1
    temperature: float = DEFAULT_TEMPERATURE
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.batch_size, self.max_blocks_per_code, self.epochs) < 1:
            raise ValueError("batch size, block cap, and epochs must be positive")
        if self.learning_rate < 0 or self.temperature <= 0:
            raise ValueError("learning rate must be >= 0 and temperature > 0")


@dataclass
class TrainPair:
    """One training example: a query vector and its code's sampled blocks."""

    query_embedding: np.ndarray
    block_embeddings: list[np.ndarray]


@dataclass
class FusionGrads:
    W1: np.ndarray | None = None
    b1: np.ndarray | None = None
    w2: np.ndarray | None = None
    b2: float = 0.0


def sample_blocks(blocks: list, max_blocks: int, rng: np.random.Generator) -> list:
    """Uniform subset of at most ``max_blocks``, original order preserved."""
    if not blocks:
        raise EmptyInput("no blocks to sample")
    if len(blocks) <= max_blocks:
        return list(blocks)
    idx = np.sort(rng.choice(len(blocks), size=max_blocks, replace=False))
    return [blocks[i] for i in idx]


def _normalize_rows(mat: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(mat, axis=1)
    if np.any(norms == 0.0):
        raise ZeroVector(f"zero-norm {what} vector; cosine undefined")
    return mat / norms[:, None], norms


def contrastive_loss(
    fused_codes: np.ndarray | list[np.ndarray],
    queries: np.ndarray | list[np.ndarray],
    temperature: float = DEFAULT_TEMPERATURE,
) -> float:
    """In-batch softmax cross-entropy over cosine/temperature scores.

    Pair i is the positive for query i; every other code in the batch is a
    negative.  Always >= 0; exactly 0 for a single-pair batch.
    """
    codes = np.atleast_2d(np.asarray(fused_codes, dtype=np.float64))
    qs = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if codes.shape != qs.shape or codes.shape[0] == 0:
        raise EmptyInput("queries and codes must be equal-length non-empty lists")
    q_hat, _ = _normalize_rows(qs, "query")
    c_hat, _ = _normalize_rows(codes, "code")
    scores = (q_hat @ c_hat.T) / temperature
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_p_diag = np.diag(shifted) - log_z
    return float(-log_p_diag.mean())


def loss_and_grads(
    block_sets: list[np.ndarray],
    queries: np.ndarray,
    params: FusionParams,
    temperature: float = DEFAULT_TEMPERATURE,
) -> tuple[float, FusionGrads]:
    """Batch loss plus analytic gradients w.r.t. the attention parameters."""
    if not is_attention(params.method):
        raise ValueError(f"method {params.method!r} has no trainable parameters")
    params.validate()
    n = len(block_sets)
    queries = np.asarray(queries, dtype=np.float64)
    if queries.shape[0] != n or n == 0:
        raise EmptyInput("queries and block sets must be equal-length non-empty lists")

    mode = combine_mode(params.method)
    two_layer = is_two_layer(params.method)

    # Forward through fusion, keeping per-code intermediates for the backward.
    mats = [np.atleast_2d(np.asarray(b, dtype=np.float64)) for b in block_sets]
    alphas: list[np.ndarray] = []
    hiddens: list[np.ndarray] = []
    codes = np.empty((n, params.dim), dtype=np.float64)
    for i, mat in enumerate(mats):
        logits = attention_logits(mat, params)
        z = np.exp(logits - logits.max())
        a = z / z.sum()
        alphas.append(a)
        if two_layer:
            hiddens.append(np.tanh(mat @ params.W1 + params.b1))
        c = a @ mat
        if mode == 1:
            c = c + mat.mean(axis=0)
        elif mode == 2:
            c = c + mat.max(axis=0)
        codes[i] = c

    q_hat, _ = _normalize_rows(queries, "query")
    c_hat, c_norms = _normalize_rows(codes, "code")
    scores = (q_hat @ c_hat.T) / temperature
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp_s = np.exp(shifted)
    probs = exp_s / exp_s.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore"):  # a zero positive prob -> inf loss,
        loss = float(-(np.log(np.diag(probs))).mean())  # caught as NonFiniteLoss


    # d loss / d scores, then back through cosine normalization.
    d_scores = (probs - np.eye(n)) / n
    d_c_hat = (d_scores.T @ q_hat) / temperature
    d_codes = (
        d_c_hat - (np.sum(d_c_hat * c_hat, axis=1, keepdims=True)) * c_hat
    ) / c_norms[:, None]

    grads = FusionGrads(
        W1=None if params.W1 is None else np.zeros_like(params.W1),
        b1=None if params.b1 is None else np.zeros_like(params.b1),
        w2=np.zeros_like(params.w2),
        b2=0.0,
    )
    for i, mat in enumerate(mats):
        a = alphas[i]
        g_c = d_codes[i]
        t = mat @ g_c
        g_logits = a * (t - float(a @ t))
        if two_layer:
            h = hiddens[i]
            grads.w2 += h.T @ g_logits
            grads.b2 += float(g_logits.sum())
            g_pre = np.outer(g_logits, params.w2) * (1.0 - h * h)
            grads.W1 += mat.T @ g_pre
            grads.b1 += g_pre.sum(axis=0)
        else:
            grads.w2 += mat.T @ g_logits
            grads.b2 += float(g_logits.sum())
    return loss, grads


def _sgd_step(params: FusionParams, grads: FusionGrads, lr: float) -> None:
    params.w2 = params.w2 - lr * grads.w2
    params.b2 = params.b2 - lr * grads.b2
    if grads.W1 is not None:
        params.W1 = params.W1 - lr * grads.W1
        params.b1 = params.b1 - lr * grads.b1


@dataclass
class TrainResult:
    params: FusionParams
    epoch_losses: list[float] = field(default_factory=list)


def train(
    pairs: list[tuple[np.ndarray, list[np.ndarray]]],
    cfg: TrainConfig,
    params: FusionParams,
) -> TrainResult:
    """SGD over the attention head; everything downstream of the seed is fixed.

    ``pairs`` holds (query embedding, all block embeddings) per code; each
    epoch reshuffles pair order and resamples up to ``max_blocks_per_code``
    blocks per code, both driven by one seeded generator.
    """
    if not pairs:
        raise EmptyInput("empty training set")
    if not is_attention(params.method):
        raise ValueError(f"method {params.method!r} has no trainable parameters")
    rng = np.random.default_rng(cfg.seed)
    result = TrainResult(params=params)
    batch_id = 0
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(pairs))
        total = 0.0
        for lo in range(0, len(order), cfg.batch_size):
            chosen = order[lo : lo + cfg.batch_size]
            sampled = [
                TrainPair(
                    pairs[i][0],
                    sample_blocks(pairs[i][1], cfg.max_blocks_per_code, rng),
                )
                for i in chosen
            ]
            block_sets = [np.stack(p.block_embeddings) for p in sampled]
            queries = np.stack([p.query_embedding for p in sampled])
            loss, grads = loss_and_grads(block_sets, queries, params, cfg.temperature)
            if not np.isfinite(loss):
                raise NonFiniteLoss(batch_id)
            if cfg.learning_rate > 0:
                _sgd_step(params, grads, cfg.learning_rate)
            total += loss * len(chosen)
            batch_id += 1
        epoch_loss = total / len(pairs)
        result.epoch_losses.append(epoch_loss)
        logger.info("epoch %d: loss %.6f", epoch + 1, epoch_loss)
    return result


def pairs_from_records(records, cfg, table=None) -> tuple[list, list[tuple[str, str]]]:
    """Build (query embedding, block embeddings) pairs from corpus records.

    Records without a usable query, with empty code, or with no encodable
    blocks are skipped and reported; the encoder stays frozen throughout.
    """
    from .encoding import encode_query, encode_texts
    from .errors import LcrError
    from .scheduler import table_block_encoder, _snippet_blocks

    encoder = (
        table_block_encoder(cfg.encoder, table)
        if table is not None
        else (lambda texts, ids: encode_texts(texts, cfg.encoder))
    )
    pairs: list[tuple[np.ndarray, list[np.ndarray]]] = []
    skipped: list[tuple[str, str]] = []
    for record in records:
        if not (record.query or "").strip():
            skipped.append((record.id, "EmptyQuery"))
            continue
        try:
            blocks, _ = _snippet_blocks(record.snippet(), cfg)
            q_emb = encode_query(record.query, cfg.encoder)
        except LcrError as exc:
            skipped.append((record.id, exc.name))
            continue
        ids = [f"{record.id}#{b.index}" for b in blocks]
        mat, ok = encoder([b.text for b in blocks], ids)
        kept = [mat[i] for i in range(len(blocks)) if ok[i]]
        if not kept:
            skipped.append((record.id, "ZeroVector"))
            continue
        pairs.append((q_emb, kept))
    return pairs, skipped
