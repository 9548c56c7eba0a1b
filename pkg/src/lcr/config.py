"""End-to-end pipeline configuration and the index fingerprint it induces."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .encoding import EncoderSpec
from .fusion import FusionParams, normalize_method, params_hash
from .splitting import SplitStrategy
from .windowing import DEFAULT_STEP, DEFAULT_WINDOW, WindowConfig


@dataclass(frozen=True)
class PipelineConfig:
    """Everything that shapes a code representation.

    ``truncate`` > 0 switches to the truncation baseline: encode only the
    first that many code tokens, no splitting or windowing (the behaviour the
    windowed pipeline is designed to beat on long code).
    """

    split: str = "ast"
    window: int = DEFAULT_WINDOW
    step: int = DEFAULT_STEP
    tail: str = "paper_floor"
    fusion: str = "attn1_mean"
    encoder: EncoderSpec = field(default_factory=EncoderSpec)
    batch_size: int = 256
    seed: int = 0
    truncate: int = 0
    metric: str = "cosine"  # cosine | euclidean

    def __post_init__(self) -> None:
        object.__setattr__(self, "fusion", normalize_method(self.fusion))
        if self.metric not in ("cosine", "euclidean"):
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.batch_size < 1:
            raise ValueError("batch size must be positive")

    def strategy(self) -> SplitStrategy:
        return SplitStrategy(self.split)

    def window_config(self) -> WindowConfig:
        return WindowConfig(self.window, self.step, self.tail)

    def with_batch_size(self, batch_size: int) -> "PipelineConfig":
        return replace(self, batch_size=batch_size)

    def fingerprint(self, params: FusionParams | None) -> dict:
        """Config summary stored in the index header and re-checked at search."""
        return {
            "split": self.split,
            "window": self.window,
            "step": self.step,
            "tail": self.tail,
            "fusion": self.fusion,
            "encoder": self.encoder.fingerprint_fields(),
            "truncate": self.truncate,
            "metric": self.metric,
            "params_hash": None if params is None else params_hash(params),
        }
