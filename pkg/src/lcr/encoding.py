"""Block and query encoders.

Two encoder kinds sit behind one spec:

* ``builtin_hash`` — a deterministic signed feature-hashing encoder over the
  code tokenizer's subwords.  Token counts are scattered into ``dim`` buckets
  by one fixed-seed FNV-1a hash; a second, independently seeded FNV-1a hash
  supplies the sign, which keeps dot products unbiased estimates of token
  overlap.  No model weights, no process-dependent state: identical text
  yields bit-identical vectors across runs and processes.
* ``external_table`` — exact lookup of vectors precomputed elsewhere (for
  example by a pretrained transformer) and imported from a text table file.

Queries are truncated to their first 128 tokens before encoding; code blocks
are never truncated here (length control happens upstream via windowing).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimMismatch, MalformedFile, MissingEmbedding, ZeroVector
from .tokenizer import TOKENIZER_RULE, tokenize

QUERY_TOKEN_LIMIT = 128
DEFAULT_DIM = 256

# FNV-1a, 64-bit.  Two different offset bases give two independent hashes:
# one picks the bucket, the other the sign.
_FNV_PRIME = 0x100000001B3
_BUCKET_BASIS = 0xCBF29CE484222325
_SIGN_BASIS = 0xAF63BD4C8601B7DF
_MASK64 = 0xFFFFFFFFFFFFFFFF


def _fnv1a(data: bytes, basis: int) -> int:
    h = basis
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


@dataclass(frozen=True)
class EncoderSpec:
    """Configuration of the encoding stage; part of every index fingerprint."""

    kind: str = "builtin_hash"  # builtin_hash | external_table
    dim: int = DEFAULT_DIM
    tokenizer: str = TOKENIZER_RULE
    normalization: str = "l2"  # l2 | none
    table_path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("builtin_hash", "external_table"):
            raise ValueError(f"unknown encoder kind {self.kind!r}")
        if self.dim < 2:
            raise ValueError("encoder dim must be >= 2")
        if self.normalization not in ("l2", "none"):
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def fingerprint_fields(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "tokenizer": self.tokenizer,
            "normalization": self.normalization,
        }


def hash_embed(norm_tokens: list[str], dim: int) -> np.ndarray:
    """Signed bucket counts for a token list (pre-normalization)."""
    vec = np.zeros(dim, dtype=np.float64)
    for tok in norm_tokens:
        data = tok.encode("utf-8")
        bucket = _fnv1a(data, _BUCKET_BASIS) % dim
        sign = 1.0 if _fnv1a(data, _SIGN_BASIS) & 1 else -1.0
        vec[bucket] += sign
    return vec


def _finish(vec: np.ndarray, spec: EncoderSpec) -> np.ndarray | None:
    """Apply normalization; None signals an all-zero vector."""
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        return None
    if spec.normalization == "l2":
        return vec / norm
    return vec


def encode_tokens(norm_tokens: list[str], spec: EncoderSpec) -> np.ndarray:
    """Encode an already-tokenized text. Raises ZeroVector on empty signal."""
    out = _finish(hash_embed(norm_tokens, spec.dim), spec)
    if out is None:
        raise ZeroVector("text produced no hashable tokens")
    return out


def encode_text(text: str, spec: EncoderSpec) -> np.ndarray:
    """Encode one code block's text with the builtin hashing encoder."""
    return encode_tokens([t.norm for t in tokenize(text)], spec)


def encode_query(text: str, spec: EncoderSpec) -> np.ndarray:
    """Encode a natural-language query; only the first 128 tokens contribute."""
    toks = [t.norm for t in tokenize(text)[:QUERY_TOKEN_LIMIT]]
    return encode_tokens(toks, spec)


def encode_texts(texts: list[str], spec: EncoderSpec) -> tuple[np.ndarray, np.ndarray]:
    """Batch-encode block texts.

    Returns ``(matrix, ok)`` where ``matrix`` is ``(len(texts), dim)`` and
    ``ok[i]`` is False for texts that hashed to a zero vector (callers drop
    those blocks rather than aborting the batch).
    """
    mat = np.zeros((len(texts), spec.dim), dtype=np.float64)
    ok = np.ones(len(texts), dtype=bool)
    for i, text in enumerate(texts):
        raw = hash_embed([t.norm for t in tokenize(text)], spec.dim)
        done = _finish(raw, spec)
        if done is None:
            ok[i] = False
        else:
            mat[i] = done
    return mat, ok


@dataclass
class EmbeddingTable:
    """Vectors precomputed outside the toolkit, keyed by block or query id.

    Block ids follow ``<snippet_id>#<block_index>``; query rows use the bare
    query id.
    """

    dim: int
    rows: dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, row_id: str, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.dim,):
            raise DimMismatch(
                f"row {row_id!r} has length {values.shape[0]}, table dim is {self.dim}"
            )
        self.rows[row_id] = values

    def lookup(self, row_id: str) -> np.ndarray:
        try:
            return self.rows[row_id]
        except KeyError:
            raise MissingEmbedding(f"no embedding for id {row_id!r}") from None

    def __len__(self) -> int:
        return len(self.rows)


def load_embedding_table(path: str | Path) -> EmbeddingTable:
    """Parse a table file: header ``dim=<D> count=<N>``, then N tab-split rows."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        parts = dict(kv.split("=", 1) for kv in header.split() if "=" in kv)
        if "dim" not in parts or "count" not in parts:
            raise MalformedFile(f"{path}: bad header {header!r}")
        dim, count = int(parts["dim"]), int(parts["count"])
        table = EmbeddingTable(dim=dim)
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                row_id, values_s = line.split("\t", 1)
            except ValueError:
                raise MalformedFile(f"{path}:{lineno}: expected '<id>\\t<floats>'") from None
            values = np.array([float(v) for v in values_s.split()], dtype=np.float64)
            if values.shape[0] != dim:
                raise DimMismatch(
                    f"{path}:{lineno}: row {row_id!r} has {values.shape[0]} values, dim={dim}"
                )
            table.rows[row_id] = values
    if len(table) != count:
        raise MalformedFile(f"{path}: header declares {count} rows, found {len(table)}")
    return table


def write_embedding_table(path: str | Path, table: EmbeddingTable) -> None:
    """Serialize a table; floats use repr so a reload is exact."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"dim={table.dim} count={len(table.rows)}\n")
        for row_id, values in table.rows.items():
            floats = " ".join(repr(float(v)) for v in values)
            fh.write(f"{row_id}\t{floats}\n")
