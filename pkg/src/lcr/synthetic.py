"""Synthetic corpus generator for long-code retrieval experiments.

Each record is a small Python module paired with a query made of rare
keywords that occur in exactly one record's code.  For a configurable
fraction of records the keywords are planted strictly after the first 256
code tokens, which is invisible to a truncating encoder but trivial for
lexical matching and for the windowed pipeline; the remaining records carry
their keywords up front.  Generation is fully seeded: identical arguments
produce byte-identical corpus files.
"""

from __future__ import annotations

import numpy as np

from .corpus import CorpusRecord
from .tokenizer import token_count

TRUNCATION_LIMIT = 256
_PLANT_MARGIN = 24  # keywords start at least this many tokens past the limit

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


def _make_words(rng: np.random.Generator, count: int, syllables: int = 3) -> list[str]:
    """Unique pronounceable identifiers, disjoint from Python keywords."""
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < count:
        word = "".join(
            _CONSONANTS[rng.integers(len(_CONSONANTS))]
            + _VOWELS[rng.integers(len(_VOWELS))]
            for _ in range(syllables)
        )
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _filler_function(rng: np.random.Generator, words: list[str], index: int) -> str:
    def pick() -> str:
        return words[rng.integers(len(words))]

    name = f"{pick()}_{index}"
    lines = [f"def {name}({pick()}, {pick()}):"]
    for _ in range(int(rng.integers(2, 5))):
        kind = int(rng.integers(3))
        if kind == 0:
            lines.append(f"    {pick()} = {pick()}({pick()}, {pick()})")
        elif kind == 1:
            lines.append(f"    if {pick()} > {pick()}:")
            lines.append(f"        {pick()} = {pick()} + {pick()}")
        else:
            lines.append(f"    for {pick()} in {pick()}:")
            lines.append(f"        {pick()} = {pick()}({pick()})")
    lines.append(f"    return {pick()}")
    return "\n".join(lines)


def _keyword_function(keywords: list[str], index: int) -> str:
    kw1, kw2, kw3, kw4, kw5 = keywords
    return "\n".join(
        [
            f"def {kw1}_{index}({kw2}, {kw3}):",
            f"    {kw4} = {kw2}({kw3}, {kw5})",
            f"    {kw1} = {kw4} + {kw5}",
            f"    if {kw1} > {kw4}:",
            f"        {kw5} = {kw2}({kw1})",
            f"    return {kw3} + {kw5}",
        ]
    )


def generate_corpus(
    n: int,
    seed: int = 0,
    planted_frac: float = 0.5,
) -> list[CorpusRecord]:
    """Generate ``n`` records; the first ``round(n*planted_frac)`` are planted."""
    rng = np.random.default_rng(seed)
    keyword_pool = _make_words(rng, 5 * n, syllables=4)
    filler = _make_words(rng, 150, syllables=3)
    n_planted = int(round(n * planted_frac))
    records: list[CorpusRecord] = []
    for i in range(n):
        keywords = keyword_pool[5 * i : 5 * i + 5]
        planted = i < n_planted
        parts: list[str] = []
        fn = 0
        if planted:
            # Filler prefix must push the keywords past the truncation window.
            while token_count("\n\n".join(parts)) < TRUNCATION_LIMIT + _PLANT_MARGIN:
                parts.append(_filler_function(rng, filler, fn))
                fn += 1
            parts.append(_keyword_function(keywords, fn))
            fn += 1
        else:
            parts.append(_keyword_function(keywords, fn))
            fn += 1
        for _ in range(int(rng.integers(2, 8))):
            parts.append(_filler_function(rng, filler, fn))
            fn += 1
        code = "\n\n".join(parts)
        records.append(
            CorpusRecord(
                id=f"snip-{i:05d}",
                language="python",
                code=code,
                query=" ".join(keywords),
                token_length=token_count(code),
                planted=planted,
            )
        )
    return records
