"""Combine-divide batch scheduling for corpus encoding.

Different snippets window into different block counts, which makes naive
batching awkward.  The scheduler flattens each code batch's blocks into one
block batch, encodes it in a single call, then regroups embeddings per code
through an explicit code-to-block index map before fusion.  Batching is pure
scheduling: representations are bit-identical at any batch size because block
encoding is per-text and fusion reduces each code's segment independently.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .config import PipelineConfig
from .encoding import EmbeddingTable, EncoderSpec, encode_texts, encode_tokens
from .errors import (
    EmptyBatch,
    LengthMismatch,
    LcrError,
    ParseFailure,
    UnsupportedLanguage,
    ZeroVector,
)
from .fusion import FusionParams, fuse_segments
from .splitting import SourceSnippet, SplitStrategy, split
from .tokenizer import tokenize
from .windowing import CodeBlock, window

logger = logging.getLogger(__name__)

# Batch encoder: (block texts, block ids) -> (matrix, ok mask).
BlockEncoder = Callable[[list[str], list[str]], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class CodeIndexMap:
    """Half-open ranges mapping each code in a batch to its flattened blocks."""

    ranges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        expected = 0
        for lo, hi in self.ranges:
            if lo != expected or hi <= lo:
                raise LengthMismatch(f"ranges must tile contiguously, got {self.ranges}")
            expected = hi

    @property
    def total(self) -> int:
        return self.ranges[-1][1] if self.ranges else 0

    def starts(self) -> np.ndarray:
        """Segment offsets [0, hi_0, hi_1, …] as an int64 vector."""
        return np.array([0, *(hi for _, hi in self.ranges)], dtype=np.int64)

    @classmethod
    def from_counts(cls, counts: list[int]) -> "CodeIndexMap":
        ranges = []
        offset = 0
        for c in counts:
            ranges.append((offset, offset + c))
            offset += c
        return cls(tuple(ranges))


def combine(
    batch: list[tuple[SourceSnippet, list[CodeBlock]]],
) -> tuple[list[CodeBlock], CodeIndexMap]:
    """Flatten per-code block lists into one block batch plus its index map."""
    if not batch:
        raise EmptyBatch("no codes to combine")
    flat: list[CodeBlock] = []
    counts: list[int] = []
    for _snippet, blocks in batch:
        if not blocks:
            raise EmptyBatch("every code must contribute at least one block")
        flat.extend(blocks)
        counts.append(len(blocks))
    return flat, CodeIndexMap.from_counts(counts)


def divide(
    block_embeddings: list[np.ndarray] | np.ndarray, m: CodeIndexMap
) -> list[list[np.ndarray]]:
    """Regroup flat block embeddings per code, preserving order."""
    if len(block_embeddings) != m.total:
        raise LengthMismatch(
            f"{len(block_embeddings)} embeddings for a map of {m.total} blocks"
        )
    return [[block_embeddings[i] for i in range(lo, hi)] for lo, hi in m.ranges]


def builtin_block_encoder(spec: EncoderSpec) -> BlockEncoder:
    def encode(texts: list[str], ids: list[str]) -> tuple[np.ndarray, np.ndarray]:
        return encode_texts(texts, spec)

    return encode


def table_block_encoder(spec: EncoderSpec, table: EmbeddingTable) -> BlockEncoder:
    def encode(texts: list[str], ids: list[str]) -> tuple[np.ndarray, np.ndarray]:
        mat = np.zeros((len(ids), spec.dim), dtype=np.float64)
        ok = np.ones(len(ids), dtype=bool)
        for i, block_id in enumerate(ids):
            row = table.rows.get(block_id)
            if row is None:
                ok[i] = False
            else:
                mat[i] = row
        return mat, ok

    return encode


@dataclass
class EncodeResult:
    """Corpus representations in corpus order, plus per-snippet diagnostics."""

    ids: list[str]
    matrix: np.ndarray  # (len(ids), dim) float64
    skipped: list[tuple[str, str]] = field(default_factory=list)
    fallbacks: list[str] = field(default_factory=list)


def _snippet_blocks(
    snippet: SourceSnippet, cfg: PipelineConfig
) -> tuple[list[CodeBlock], bool]:
    """Split and window one snippet; falls back to line splitting when the
    structural parse is unavailable for its language."""
    fallback = False
    try:
        pieces = split(snippet, cfg.strategy())
    except (UnsupportedLanguage, ParseFailure) as exc:
        logger.warning("snippet %s: %s; falling back to line split", snippet.id, exc)
        pieces = split(snippet, SplitStrategy("line"))
        fallback = True
    return window(pieces, cfg.window_config()), fallback


def encode_corpus(
    corpus: list[SourceSnippet],
    cfg: PipelineConfig,
    params: FusionParams | None = None,
    encoder: BlockEncoder | None = None,
    missing_fails_snippet: bool = False,
) -> EncodeResult:
    """Encode a corpus into fused representations, batch by batch.

    Output order matches corpus order and is independent of ``cfg.batch_size``
    bit for bit.  Per-snippet failures (empty source, nothing encodable) land
    in the skip list instead of aborting the run.
    """
    if not corpus:
        raise EmptyBatch("empty corpus")
    if encoder is None:
        encoder = builtin_block_encoder(cfg.encoder)
    result = EncodeResult(ids=[], matrix=np.zeros((0, cfg.encoder.dim)))
    rows: list[np.ndarray] = []
    for batch_lo in range(0, len(corpus), cfg.batch_size):
        batch = corpus[batch_lo : batch_lo + cfg.batch_size]
        if cfg.truncate > 0:
            _encode_truncated_batch(batch, cfg, result, rows)
        else:
            _encode_windowed_batch(
                batch, cfg, params, encoder, missing_fails_snippet, result, rows
            )
        logger.info(
            "encoded %d/%d snippets", min(batch_lo + cfg.batch_size, len(corpus)), len(corpus)
        )
    if rows:
        result.matrix = np.stack(rows)
    return result


def _encode_truncated_batch(
    batch: list[SourceSnippet],
    cfg: PipelineConfig,
    result: EncodeResult,
    rows: list[np.ndarray],
) -> None:
    for snippet in batch:
        try:
            toks = [t.norm for t in tokenize(snippet.text)[: cfg.truncate]]
            rep = encode_tokens(toks, cfg.encoder)
        except LcrError as exc:
            result.skipped.append((snippet.id, exc.name))
            continue
        result.ids.append(snippet.id)
        rows.append(rep)


def _encode_windowed_batch(
    batch: list[SourceSnippet],
    cfg: PipelineConfig,
    params: FusionParams | None,
    encoder: BlockEncoder,
    missing_fails_snippet: bool,
    result: EncodeResult,
    rows: list[np.ndarray],
) -> None:
    prepared: list[tuple[SourceSnippet, list[CodeBlock]]] = []
    for snippet in batch:
        try:
            blocks, fell_back = _snippet_blocks(snippet, cfg)
        except LcrError as exc:
            result.skipped.append((snippet.id, exc.name))
            continue
        if fell_back:
            result.fallbacks.append(snippet.id)
        prepared.append((snippet, blocks))
    if not prepared:
        return

    flat_blocks, index_map = combine(prepared)
    texts = [b.text for b in flat_blocks]
    ids = [
        f"{snippet.id}#{b.index}"
        for (snippet, blocks) in prepared
        for b in blocks
    ]
    mat, ok = encoder(texts, ids)

    kept_rows: list[np.ndarray] = []
    counts: list[int] = []
    kept_snippets: list[SourceSnippet] = []
    for (snippet, _blocks), (lo, hi) in zip(prepared, index_map.ranges):
        seg_ok = ok[lo:hi]
        if missing_fails_snippet and not seg_ok.all():
            result.skipped.append((snippet.id, "MissingEmbedding"))
            continue
        kept = [mat[i] for i in range(lo, hi) if ok[i]]
        if not kept:
            result.skipped.append((snippet.id, ZeroVector("all blocks empty").name))
            continue
        kept_rows.extend(kept)
        counts.append(len(kept))
        kept_snippets.append(snippet)
    if not kept_snippets:
        return

    flat = np.stack(kept_rows)
    starts = CodeIndexMap.from_counts(counts).starts()
    if params is None:
        raise ValueError("fusion params are required for windowed encoding")
    fused = fuse_segments(flat, starts, params)
    for i, snippet in enumerate(kept_snippets):
        result.ids.append(snippet.id)
        rows.append(fused[i])
