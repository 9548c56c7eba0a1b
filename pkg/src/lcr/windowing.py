"""Sliding-window grouping of pieces into partially overlapping blocks."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyInput
from .splitting import CodePiece

DEFAULT_WINDOW = 32
DEFAULT_STEP = 16

TAIL_POLICIES = ("paper_floor", "include_tail")


@dataclass(frozen=True)
class WindowConfig:
    """Window size w (pieces per block) and stride s, with the tail rule.

    ``paper_floor`` keeps exactly floor((n-w)/s)+1 blocks, which can drop
    trailing pieces when (n-w) is not a multiple of s; ``include_tail`` adds
    one truncated final block so every piece lands in at least one block.
    """

    window: int = DEFAULT_WINDOW
    step: int = DEFAULT_STEP
    tail_policy: str = "paper_floor"

    def __post_init__(self) -> None:
        if self.window < 1 or self.step < 1:
            raise ValueError("window and step must be positive")
        if self.step > self.window:
            raise ValueError("step > window would leave gaps between blocks")
        if self.tail_policy not in TAIL_POLICIES:
            raise ValueError(f"unknown tail policy {self.tail_policy!r}")


@dataclass(frozen=True)
class CodeBlock:
    """A window of consecutive pieces; text joins member pieces with newlines."""

    index: int
    piece_start: int
    piece_end: int
    text: str


def block_count(n: int, cfg: WindowConfig) -> int:
    """Number of blocks the window op yields for ``n`` pieces.

    Short snippets (n < w) clamp to a single all-pieces block; the floor
    formula would yield a non-positive count there.
    """
    if n < 1:
        raise EmptyInput("piece count must be >= 1")
    if n < cfg.window:
        return 1
    floor_count = (n - cfg.window) // cfg.step + 1
    if cfg.tail_policy == "include_tail":
        last_end = (floor_count - 1) * cfg.step + cfg.window
        if last_end < n:
            return floor_count + 1
    return floor_count


def window(pieces: list[CodePiece], cfg: WindowConfig) -> list[CodeBlock]:
    """Group ``pieces`` into exactly ``block_count(len(pieces), cfg)`` blocks."""
    if not pieces:
        raise EmptyInput("cannot window an empty piece list")
    n = len(pieces)
    k = block_count(n, cfg)
    blocks: list[CodeBlock] = []
    for j in range(k):
        lo = j * cfg.step
        hi = min(lo + cfg.window, n)
        if n < cfg.window:
            lo, hi = 0, n
        text = "\n".join(p.text for p in pieces[lo:hi])
        blocks.append(CodeBlock(j, lo, hi, text))
    return blocks
