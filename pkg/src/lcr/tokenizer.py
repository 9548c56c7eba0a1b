"""Code-aware tokenizer shared by the encoder and the token split strategy.

Identifiers are split on underscores and camelCase humps because those
subwords carry the query-matching signal ("readImageFile" should match the
query "read image file").  Numbers survive as-is; every other non-whitespace
character becomes a single punctuation token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# One scan for identifiers, numbers, then any leftover symbol character.
_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+(?:\.[0-9]+)?|[^\sA-Za-z0-9_]")

# Splits one identifier chunk into camelCase humps, acronym runs, and digits.
_SUBWORD_RE = re.compile(r"[a-z]+|[A-Z][a-z]+|[A-Z]+(?![a-z])|[0-9]+")

TOKENIZER_RULE = "code-subword-v1"


@dataclass(frozen=True)
class Token:
    """One token with its half-open character span into the source text."""

    text: str
    start: int
    end: int

    @property
    def norm(self) -> str:
        return self.text.lower()


def tokenize(text: str) -> list[Token]:
    """Tokenize ``text`` into identifier subwords, numbers, and punctuation.

    Token spans index into ``text`` and never overlap; ``text[t.start:t.end]
    == t.text`` for every token.
    """
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        piece = m.group(0)
        if piece[0].isalpha() or piece[0] == "_":
            base = m.start()
            for sub in _SUBWORD_RE.finditer(piece):
                tokens.append(Token(sub.group(0), base + sub.start(), base + sub.end()))
        else:
            tokens.append(Token(piece, m.start(), m.end()))
    return tokens


def token_count(text: str) -> int:
    """Number of tokens ``tokenize`` would produce (no allocation of spans)."""
    return len(tokenize(text))
