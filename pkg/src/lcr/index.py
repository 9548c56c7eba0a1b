"""Searchable store of fused code representations.

The index is an exhaustive, exact scanner: every query is scored against
every entry (cosine by default, negative Euclidean distance behind a flag)
and ties break by ascending snippet id so rankings are total orders.  Desk
scale corpora (tens of thousands of entries) scan in milliseconds; no
approximate structure is worth its complexity here.

On disk: a versioned little-endian binary — magic, version, dim, count, a
fingerprint JSON blob describing the full pipeline configuration, then one
(id length, id bytes, dim float32 values) record per entry.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .encoding import encode_query
from .encoding import EncoderSpec
from .errors import (
    AllSnippetsFailed,
    FingerprintMismatch,
    MalformedFile,
    MissingGroundTruth,
    ZeroVector,
)
from .fusion import FusionParams
from .scheduler import BlockEncoder, EncodeResult, encode_corpus
from .splitting import SourceSnippet

_MAGIC = b"LCRIDX\x00\x01"
_VERSION = 1


@dataclass
class CodeIndex:
    """Fused representations plus the configuration fingerprint that built them."""

    ids: list[str]
    matrix: np.ndarray  # (N, dim) float32
    fingerprint: dict
    _row_of: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._row_of:
            self._row_of = {sid: i for i, sid in enumerate(self.ids)}
        if len(self._row_of) != len(self.ids):
            raise MalformedFile("duplicate snippet ids in index")

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return len(self.ids)

    def row_of(self, snippet_id: str) -> int:
        try:
            return self._row_of[snippet_id]
        except KeyError:
            raise MissingGroundTruth(snippet_id) from None


@dataclass
class SearchResult:
    """Ranked (id, score) pairs, scores non-increasing; optional ground-truth rank."""

    results: list[tuple[str, float]]
    gt_rank: int | None = None


def build_index(
    corpus: list[SourceSnippet],
    cfg: PipelineConfig,
    params: FusionParams | None,
    encoder: BlockEncoder | None = None,
    missing_fails_snippet: bool = False,
) -> tuple[CodeIndex, EncodeResult]:
    """Run the full pipeline over ``corpus``; skipped snippets are reported,
    an empty result is an error."""
    encoded = encode_corpus(
        corpus, cfg, params, encoder=encoder, missing_fails_snippet=missing_fails_snippet
    )
    if not encoded.ids:
        raise AllSnippetsFailed(f"all {len(corpus)} snippets failed; see skip list")
    index = CodeIndex(
        ids=encoded.ids,
        matrix=encoded.matrix.astype(np.float32),
        fingerprint=cfg.fingerprint(params),
    )
    return index, encoded


# ----------------------------------------------------------------------
# Scoring
# ----------------------------------------------------------------------


def _scores(index: CodeIndex, query_vec: np.ndarray) -> np.ndarray:
    q = np.asarray(query_vec, dtype=np.float64)
    qn = float(np.linalg.norm(q))
    if qn == 0.0:
        raise ZeroVector("query vector is zero")
    mat = index.matrix.astype(np.float64)
    if index.fingerprint.get("metric") == "euclidean":
        diff = mat - q[None, :]
        return -np.sqrt(np.sum(diff * diff, axis=1))
    norms = np.linalg.norm(mat, axis=1)
    norms[norms == 0.0] = np.inf  # defensive: zero rows score 0
    return (mat @ q) / (norms * qn)


def query_vector(
    index: CodeIndex,
    query: str,
    table_lookup=None,
    query_id: str | None = None,
) -> np.ndarray:
    """Encode a query compatibly with the index fingerprint.

    ``builtin_hash`` indexes encode the query text; ``external_table``
    indexes look up ``query_id`` in an embedding table.
    """
    enc = index.fingerprint.get("encoder", {})
    if enc.get("kind") == "external_table":
        if table_lookup is None or query_id is None:
            raise FingerprintMismatch(
                "index was built from an embedding table; search needs --table and --query-id"
            )
        return table_lookup(query_id)
    spec = EncoderSpec(
        kind="builtin_hash",
        dim=int(enc.get("dim", index.dim)),
        tokenizer=enc.get("tokenizer", "code-subword-v1"),
        normalization=enc.get("normalization", "l2"),
    )
    return encode_query(query, spec)


def search_vector(index: CodeIndex, query_vec: np.ndarray, top_k: int = 10,
                  gt_id: str | None = None) -> SearchResult:
    """Exhaustive ranking of every entry against one query vector."""
    scores = _scores(index, query_vec)
    order = sorted(range(len(index)), key=lambda i: (-scores[i], index.ids[i]))
    k = min(top_k, len(order)) if top_k > 0 else len(order)
    results = [(index.ids[i], float(scores[i])) for i in order[:k]]
    gt_rank = None
    if gt_id is not None:
        gt_rank = rank_from_scores(index, scores, gt_id)
    return SearchResult(results=results, gt_rank=gt_rank)


def search(index: CodeIndex, query: str, top_k: int = 10,
           gt_id: str | None = None) -> SearchResult:
    """Convenience text search against a builtin-encoder index."""
    return search_vector(index, query_vector(index, query), top_k, gt_id=gt_id)


def rank_from_scores(index: CodeIndex, scores: np.ndarray, gt_id: str) -> int:
    """1-based rank of ``gt_id`` under (score desc, id asc) without sorting."""
    row = index.row_of(gt_id)
    gt_score = scores[row]
    better = int(np.sum(scores > gt_score))
    tied_before = sum(
        1
        for i in np.flatnonzero(scores == gt_score)
        if index.ids[int(i)] < gt_id
    )
    return 1 + better + tied_before


def rank_of(index: CodeIndex, query_vec: np.ndarray, gt_id: str) -> int:
    return rank_from_scores(index, _scores(index, query_vec), gt_id)


# ----------------------------------------------------------------------
# Fingerprint compatibility
# ----------------------------------------------------------------------


def check_fingerprint(index: CodeIndex, expected: dict) -> None:
    """Raise FingerprintMismatch naming every differing key."""
    diffs = [
        f"{key}: index={index.fingerprint.get(key)!r} requested={value!r}"
        for key, value in expected.items()
        if index.fingerprint.get(key) != value
    ]
    if diffs:
        raise FingerprintMismatch("; ".join(diffs))


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------


def save_index(index: CodeIndex, path: str | Path) -> None:
    fp_bytes = json.dumps(index.fingerprint, sort_keys=True).encode("utf-8")
    with Path(path).open("wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", _VERSION, index.dim, len(index)))
        fh.write(struct.pack("<I", len(fp_bytes)))
        fh.write(fp_bytes)
        for sid, row in zip(index.ids, index.matrix):
            id_bytes = sid.encode("utf-8")
            fh.write(struct.pack("<I", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(np.asarray(row, dtype="<f4").tobytes())


def load_index(path: str | Path) -> CodeIndex:
    path = Path(path)
    data = path.read_bytes()
    if data[: len(_MAGIC)] != _MAGIC:
        raise MalformedFile(f"{path}: not an index file")
    off = len(_MAGIC)
    version, dim, count = struct.unpack_from("<III", data, off)
    off += 12
    if version != _VERSION:
        raise MalformedFile(f"{path}: unsupported index version {version}")
    (fp_len,) = struct.unpack_from("<I", data, off)
    off += 4
    fingerprint = json.loads(data[off : off + fp_len].decode("utf-8"))
    off += fp_len
    ids: list[str] = []
    matrix = np.empty((count, dim), dtype=np.float32)
    row_bytes = dim * 4
    for i in range(count):
        (id_len,) = struct.unpack_from("<I", data, off)
        off += 4
        ids.append(data[off : off + id_len].decode("utf-8"))
        off += id_len
        matrix[i] = np.frombuffer(data[off : off + row_bytes], dtype="<f4")
        off += row_bytes
    if off != len(data):
        raise MalformedFile(f"{path}: trailing bytes after {count} entries")
    return CodeIndex(ids=ids, matrix=matrix, fingerprint=fingerprint)
