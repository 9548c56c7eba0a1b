"""Splitting a source snippet into an ordered piece set.

Four strategies: whitespace runs, tokenizer subwords, physical lines, and the
structure-aware partition that cuts at composite-structure header boundaries.
Line and structure strategies are lossless partitions: piece spans plus the
whitespace between them reconstruct the source byte-for-byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EmptySource
from .grammar import get_grammar
from .tokenizer import tokenize

STRATEGIES = ("space", "token", "line", "ast")

_SPACE_RUN_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class SourceSnippet:
    """One corpus entry: raw source plus its grammar tag."""

    id: str
    language: str
    text: str


@dataclass(frozen=True)
class CodePiece:
    """One contiguous fragment; ``text == source[start:end]`` always holds."""

    index: int
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class SplitStrategy:
    """Splitting mode, fixed per index build."""

    kind: str = "ast"

    def __post_init__(self) -> None:
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown split strategy {self.kind!r}")


def split(snippet: SourceSnippet, strategy: SplitStrategy) -> list[CodePiece]:
    """Split ``snippet`` into ordered, non-overlapping pieces (n >= 1)."""
    if not snippet.text.strip():
        raise EmptySource(f"snippet {snippet.id!r} is empty")
    if strategy.kind == "space":
        return _split_space(snippet.text)
    if strategy.kind == "token":
        return _split_token(snippet.text)
    if strategy.kind == "line":
        return _split_line(snippet.text)
    return ast_partition(snippet)


def _split_space(text: str) -> list[CodePiece]:
    return [
        CodePiece(i, m.start(), m.end(), m.group(0))
        for i, m in enumerate(_SPACE_RUN_RE.finditer(text))
    ]


def _split_token(text: str) -> list[CodePiece]:
    return [
        CodePiece(i, t.start, t.end, text[t.start : t.end])
        for i, t in enumerate(tokenize(text))
    ]


def _split_line(text: str) -> list[CodePiece]:
    pieces: list[CodePiece] = []
    offset = 0
    for raw in text.split("\n"):
        line = raw.rstrip("\r")
        if line.strip():
            pieces.append(CodePiece(len(pieces), offset, offset + len(line), line))
        offset += len(raw) + 1
    return pieces


def ast_partition(snippet: SourceSnippet) -> list[CodePiece]:
    """Cut the source at every composite-structure header boundary.

    The grammar layer reports each header's start and end; cutting at both
    offsets makes every header begin a fresh piece and puts each body in the
    pieces that follow, mirroring a preorder walk that drops a mark before
    and after every header it enters.  Piece spans are trimmed to their
    non-whitespace extent, so the inter-span gaps are whitespace only and the
    original text is recoverable exactly.

    Raises UnsupportedLanguage when no grammar exists for the snippet's
    language tag.
    """
    text = snippet.text
    if not text.strip():
        raise EmptySource(f"snippet {snippet.id!r} is empty")
    grammar = get_grammar(snippet.language)
    marks: set[int] = set()
    for node in grammar.composite_nodes(text):
        marks.add(node.start)
        marks.add(node.header_end)
    cuts = sorted(m for m in marks if 0 < m < len(text))
    bounds = [0, *cuts, len(text)]
    pieces: list[CodePiece] = []
    for lo, hi in zip(bounds, bounds[1:]):
        chunk = text[lo:hi]
        stripped = chunk.strip()
        if not stripped:
            continue
        start = lo + len(chunk) - len(chunk.lstrip())
        end = start + len(stripped)
        pieces.append(CodePiece(len(pieces), start, end, stripped))
    return pieces
