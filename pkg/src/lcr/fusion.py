"""Fusing k block embeddings into one code representation.

Eight methods: plain mean/max pooling, one- and two-layer softmax attention
(a learned linear scorer over each block embedding), and attention combined
additively with mean or max pooling.  The two-layer scorer maps the block
embedding to a 128-wide hidden layer with a tanh in between, then to one
logit.  Fused outputs are not re-normalized; the similarity layer uses cosine
and absorbs scale.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from ._kernels import COMBINE_MAX, COMBINE_MEAN, COMBINE_NONE
from .errors import EmptyInput, MalformedFile, ShapeMismatch

METHODS = (
    "mean",
    "max",
    "attn1",
    "attn2",
    "attn1_mean",
    "attn2_mean",
    "attn1_max",
    "attn2_max",
)

ATTN_HIDDEN = 128

PARAMS_FORMAT = "lcr-fusion-params"
PARAMS_VERSION = 1


def normalize_method(name: str) -> str:
    """Accept both CLI ('attn1+mean') and internal ('attn1_mean') spellings."""
    method = name.strip().lower().replace("+", "_")
    if method not in METHODS:
        raise ValueError(f"unknown fusion method {name!r}")
    return method


def is_attention(method: str) -> bool:
    return method.startswith("attn")


def is_two_layer(method: str) -> bool:
    return method.startswith("attn2")


def combine_mode(method: str) -> int:
    if method.endswith("_mean"):
        return COMBINE_MEAN
    if method.endswith("_max"):
        return COMBINE_MAX
    return COMBINE_NONE


@dataclass
class FusionParams:
    """Learnable weights of the attention scorer plus the fusion-method tag.

    For non-attention methods every array field is None.  One-layer: logit =
    e·w2 + b2 with w2 of length dim.  Two-layer: logit = w2·tanh(e@W1 + b1) +
    b2 with W1 of shape (dim, hidden).
    """

    method: str
    dim: int
    hidden: int = ATTN_HIDDEN
    W1: np.ndarray | None = None
    b1: np.ndarray | None = None
    w2: np.ndarray | None = None
    b2: float = 0.0

    def validate(self) -> None:
        if self.method not in METHODS:
            raise ShapeMismatch(f"unknown fusion method {self.method!r}")
        if not is_attention(self.method):
            return
        if self.w2 is None:
            raise ShapeMismatch("attention params missing w2")
        if is_two_layer(self.method):
            if self.W1 is None or self.b1 is None:
                raise ShapeMismatch("two-layer attention params missing W1/b1")
            if self.W1.shape != (self.dim, self.hidden):
                raise ShapeMismatch(
                    f"W1 shape {self.W1.shape} != ({self.dim}, {self.hidden})"
                )
            if self.b1.shape != (self.hidden,):
                raise ShapeMismatch(f"b1 shape {self.b1.shape} != ({self.hidden},)")
            if self.w2.shape != (self.hidden,):
                raise ShapeMismatch(f"w2 shape {self.w2.shape} != ({self.hidden},)")
        elif self.w2.shape != (self.dim,):
            raise ShapeMismatch(f"w2 shape {self.w2.shape} != ({self.dim},)")
        for arr in (self.W1, self.b1, self.w2):
            if arr is not None and not np.all(np.isfinite(arr)):
                raise ShapeMismatch("non-finite attention parameters")


def init_params(
    method: str, dim: int, seed: int = 0, zero: bool = False
) -> FusionParams:
    """Fresh parameters: weights uniform in [-1/sqrt(dim), 1/sqrt(dim)], zero biases.

    ``zero=True`` zero-initializes the weights too, which makes every
    attention variant start out as uniform weighting (exact meanpooling
    behaviour under the +mean variants).
    """
    method = normalize_method(method)
    if not is_attention(method):
        return FusionParams(method=method, dim=dim)
    rng = np.random.default_rng(seed)
    bound = 1.0 / np.sqrt(dim)

    def draw(shape: tuple[int, ...]) -> np.ndarray:
        if zero:
            return np.zeros(shape, dtype=np.float64)
        return rng.uniform(-bound, bound, size=shape)

    if is_two_layer(method):
        return FusionParams(
            method=method,
            dim=dim,
            W1=draw((dim, ATTN_HIDDEN)),
            b1=np.zeros(ATTN_HIDDEN, dtype=np.float64),
            w2=draw((ATTN_HIDDEN,)),
            b2=0.0,
        )
    return FusionParams(method=method, dim=dim, w2=draw((dim,)), b2=0.0)


def _as_matrix(embs: list[np.ndarray] | np.ndarray, dim: int) -> np.ndarray:
    if isinstance(embs, np.ndarray):
        mat = np.asarray(embs, dtype=np.float64)
        if mat.ndim == 1:
            mat = mat[None, :]
    else:
        if len(embs) == 0:
            raise EmptyInput("no embeddings to fuse")
        mat = np.stack([np.asarray(e, dtype=np.float64) for e in embs])
    if mat.shape[0] == 0:
        raise EmptyInput("no embeddings to fuse")
    if mat.shape[1] != dim:
        raise ShapeMismatch(f"embedding dim {mat.shape[1]} != params dim {dim}")
    return mat


def attention_logits(mat: np.ndarray, params: FusionParams) -> np.ndarray:
    """Pre-softmax scores, one per row of ``mat``.

    Rows are scored independently (kernel-side), so a block's logit never
    depends on which other blocks share the batch.
    """
    mat = np.asarray(mat, dtype=np.float64)
    if is_two_layer(params.method):
        return _kernels.attn_logits_two(mat, params.W1, params.b1, params.w2, params.b2)
    return _kernels.attn_logits_one(mat, params.w2, params.b2)


def attention_weights(
    embs: list[np.ndarray] | np.ndarray, params: FusionParams
) -> np.ndarray:
    """Softmax-normalized block weights (sum to 1)."""
    if not is_attention(params.method):
        raise ShapeMismatch(f"method {params.method!r} has no attention weights")
    params.validate()
    mat = _as_matrix(embs, params.dim)
    starts = np.array([0, mat.shape[0]], dtype=np.int64)
    logits = attention_logits(mat, params)
    _, alphas = _kernels.segment_attention(mat, starts, logits, COMBINE_NONE)
    return alphas


def pool(embs: list[np.ndarray] | np.ndarray, mode: str) -> np.ndarray:
    """Element-wise mean or max over the block embeddings."""
    if mode not in ("mean", "max"):
        raise ValueError(f"unknown pooling mode {mode!r}")
    if isinstance(embs, list) and len(embs) == 0:
        raise EmptyInput("no embeddings to pool")
    mat = np.stack([np.asarray(e, dtype=np.float64) for e in embs]) if isinstance(
        embs, list
    ) else np.asarray(embs, dtype=np.float64)
    if mat.size == 0:
        raise EmptyInput("no embeddings to pool")
    starts = np.array([0, mat.shape[0]], dtype=np.int64)
    out = _kernels.segment_pool(
        mat, starts, COMBINE_MEAN if mode == "mean" else COMBINE_MAX
    )
    return out[0]


def fuse(embs: list[np.ndarray] | np.ndarray, params: FusionParams) -> np.ndarray:
    """Fuse block embeddings into one code vector per the configured method."""
    params.validate()
    if params.method == "mean":
        return pool(embs, "mean")
    if params.method == "max":
        return pool(embs, "max")
    mat = _as_matrix(embs, params.dim)
    starts = np.array([0, mat.shape[0]], dtype=np.int64)
    logits = attention_logits(mat, params)
    fused, _ = _kernels.segment_attention(
        mat, starts, logits, combine_mode(params.method)
    )
    return fused[0]


def fuse_segments(
    flat: np.ndarray, starts: np.ndarray, params: FusionParams
) -> np.ndarray:
    """Fuse every segment of a flattened block batch in one kernel pass.

    Segment s covers rows starts[s]:starts[s+1].  Per-segment results are
    bit-identical to calling ``fuse`` on each segment alone: the logits are
    row-independent and the kernel reduces each segment separately.
    """
    params.validate()
    flat = np.asarray(flat, dtype=np.float64)
    if flat.shape[0] != starts[-1]:
        raise ShapeMismatch("flat block matrix does not match segment offsets")
    if params.method == "mean" or params.method == "max":
        mode = COMBINE_MEAN if params.method == "mean" else COMBINE_MAX
        return _kernels.segment_pool(flat, starts, mode)
    if flat.shape[1] != params.dim:
        raise ShapeMismatch(f"embedding dim {flat.shape[1]} != params dim {params.dim}")
    logits = attention_logits(flat, params)
    fused, _ = _kernels.segment_attention(
        flat, starts, logits, combine_mode(params.method)
    )
    return fused


# ----------------------------------------------------------------------
# Serialization (exact float round-trip via repr-based JSON)
# ----------------------------------------------------------------------


def params_to_dict(params: FusionParams) -> dict:
    return {
        "format": PARAMS_FORMAT,
        "version": PARAMS_VERSION,
        "method": params.method,
        "dim": params.dim,
        "hidden": params.hidden,
        "W1": None if params.W1 is None else [[float(v) for v in row] for row in params.W1],
        "b1": None if params.b1 is None else [float(v) for v in params.b1],
        "w2": None if params.w2 is None else [float(v) for v in params.w2],
        "b2": float(params.b2),
    }


def params_from_dict(data: dict) -> FusionParams:
    if data.get("format") != PARAMS_FORMAT:
        raise MalformedFile("not a fusion params file")
    params = FusionParams(
        method=data["method"],
        dim=int(data["dim"]),
        hidden=int(data.get("hidden", ATTN_HIDDEN)),
        W1=None if data["W1"] is None else np.array(data["W1"], dtype=np.float64),
        b1=None if data["b1"] is None else np.array(data["b1"], dtype=np.float64),
        w2=None if data["w2"] is None else np.array(data["w2"], dtype=np.float64),
        b2=float(data["b2"]),
    )
    params.validate()
    return params


def save_params(params: FusionParams, path: str | Path) -> None:
    Path(path).write_text(json.dumps(params_to_dict(params)) + "\n", encoding="utf-8")


def load_params(path: str | Path) -> FusionParams:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: {exc}") from None
    return params_from_dict(data)


def params_hash(params: FusionParams) -> str:
    """Stable digest of the parameter content, recorded in index fingerprints."""
    payload = json.dumps(params_to_dict(params), sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:16]
