"""Lightweight structural grammars for locating composite-structure headers.

Each supported language ships a declarative grammar profile (JSON asset under
``lcr/grammars/``, overridable via the ``LCR_GRAMMAR_DIR`` environment
variable).  A profile describes how to blank out strings and comments and
which statement-position keywords open composite structures (function/method
definitions, class-like definitions, if/elif/else, loops, try/except,
switch/case and their per-language spellings).

The scanner walks the masked source once, in document order (which is the
preorder of any syntax tree over the same constructs), and reports one
``CompositeNode`` per recognized header with two offsets: where the header
starts and where it ends (one past the opening brace / colon / header line).
Splitting cuts the source at exactly those offsets, so every recognized
header starts a new piece no matter how the rest of the scan behaves.

Recognized-form limits, by design: Java methods declared with leading type
parameters, JS function expressions assigned to variables, and Ruby ``do``
blocks are not reported as composite nodes.  Missing a form only coarsens the
split granularity; it can never break the partition invariants.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import UnsupportedLanguage

GRAMMAR_DIR_ENV = "LCR_GRAMMAR_DIR"

_DEFAULT_DIR = Path(__file__).parent / "grammars"

_WORD_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_WS = " \t\r\f\v"

# Heredoc openers; bodies are blanked in a prepass because they start on the
# line after the opener while the rest of the opener line is still code.
_RUBY_HEREDOC_RE = re.compile(r"<<([-~]?)([\"']?)(?P<ident>[A-Z_][A-Z0-9_]*)\2")
_PHP_HEREDOC_RE = re.compile(r"<<<([\"']?)(?P<ident>\w+)\1[ \t]*(?=\r?\n)")


@dataclass(frozen=True)
class CompositeNode:
    """One composite-structure header found in a snippet.

    ``start`` is the first character of the header (including modifiers such
    as ``public`` or ``async``); ``header_end`` is one past the header region,
    i.e. where the body begins.
    """

    type: str
    start: int
    header_end: int


@dataclass(frozen=True)
class StringRule:
    open: str
    close: str
    escape: bool = True
    single_line: bool = False


@dataclass(frozen=True)
class Grammar:
    """One language's compiled profile; immutable and shareable across threads."""

    name: str
    family: str  # brace | indent | end
    extensions: tuple[str, ...]
    line_comments: tuple[str, ...]
    block_comments: tuple[tuple[str, str, bool], ...]  # (open, close, line_start_only)
    strings: tuple[StringRule, ...]
    keywords: dict[str, str] = field(default_factory=dict)
    label_keywords: frozenset[str] = frozenset()
    modifiers: frozenset[str] = frozenset()
    method_pattern: bool = False
    header_semicolon_ok: bool = False
    annotations: bool = False
    chain_else: bool = False
    quirks: tuple[str, ...] = ()

    # ------------------------------------------------------------------
    # Masking
    # ------------------------------------------------------------------

    def mask(self, text: str) -> str:
        """Blank strings and comments to spaces, preserving length and newlines."""
        out = list(text)
        if "php_tags" in self.quirks:
            _mask_outside_php_tags(text, out)
        if "ruby_heredoc" in self.quirks:
            _mask_heredocs(text, out, _RUBY_HEREDOC_RE)
        if "php_heredoc" in self.quirks:
            _mask_heredocs(text, out, _PHP_HEREDOC_RE)
        n = len(text)
        i = 0
        while i < n:
            if out[i] == " " and text[i] != " ":
                i += 1  # already blanked by a prepass
                continue
            hop = self._mask_comment_at(text, out, i)
            if hop is None:
                hop = self._mask_string_at(text, out, i)
            i = hop if hop is not None else i + 1
        return "".join(out)

    def _mask_comment_at(self, text: str, out: list[str], i: int) -> int | None:
        for prefix in self.line_comments:
            if text.startswith(prefix, i):
                j = text.find("\n", i)
                j = len(text) if j == -1 else j
                _blank(out, i, j)
                return j
        for op, cl, line_start in self.block_comments:
            if text.startswith(op, i) and (not line_start or i == 0 or text[i - 1] == "\n"):
                j = text.find(cl, i + len(op))
                j = len(text) if j == -1 else j + len(cl)
                _blank(out, i, j)
                return j
        return None

    def _mask_string_at(self, text: str, out: list[str], i: int) -> int | None:
        n = len(text)
        for rule in self.strings:
            if not text.startswith(rule.open, i):
                continue
            j = i + len(rule.open)
            while j < n:
                if rule.escape and text[j] == "\\":
                    j += 2
                    continue
                if text.startswith(rule.close, j):
                    j += len(rule.close)
                    break
                if rule.single_line and text[j] == "\n":
                    break  # unterminated; stop at the newline
                j += 1
            end = min(j, n)
            _blank(out, i, end)
            return end
        return None

    # ------------------------------------------------------------------
    # Composite-node scan
    # ------------------------------------------------------------------

    def composite_nodes(self, text: str) -> list[CompositeNode]:
        """All composite headers in document order (= preorder over starts)."""
        masked = self.mask(text)
        n = len(masked)
        count_curly = self.family != "brace"
        nodes: list[CompositeNode] = []
        i = 0
        depth = 0
        stmt = True
        while i < n:
            ch = masked[i]
            if ch == "\n":
                if depth == 0:
                    stmt = True
                i += 1
                continue
            if ch in _WS:
                i += 1
                continue
            if stmt and (ch.isalpha() or ch in "_@$"):
                hit = self._match_at(masked, i)
                if hit is not None:
                    node, resume = hit
                    nodes.append(node)
                    i = resume
                    # Resuming at the body start means a statement begins here;
                    # resuming mid-header leaves the header chars to the scan.
                    stmt = resume == node.header_end
                    continue
            if ch in "([":
                depth += 1
                stmt = False
            elif ch in ")]":
                depth = max(depth - 1, 0)
                stmt = False
            elif ch == "{":
                if count_curly:
                    depth += 1
                    stmt = False
                else:
                    stmt = True
            elif ch == "}":
                if count_curly:
                    depth = max(depth - 1, 0)
                    stmt = False
                else:
                    stmt = True
            elif ch == ";":
                stmt = True
            else:
                stmt = False
            i += 1
        return nodes

    def _match_at(self, masked: str, i: int) -> tuple[CompositeNode, int] | None:
        """Try to recognize a composite header whose statement starts at ``i``."""
        n = len(masked)
        pos = i
        while True:
            if self.annotations and pos < n and masked[pos] == "@":
                skipped = self._skip_annotation(masked, pos)
                if skipped is None:
                    return None
                pos = _skip_ws(masked, skipped, newlines=True)
                continue
            m = _WORD_RE.match(masked, pos)
            if m is None:
                return None
            word = m.group(0)
            wend = m.end()
            if word in self.modifiers:
                # 'default' and friends double as switch labels.
                if word in self.label_keywords:
                    label = self._match_label(masked, i, word, wend)
                    if label is not None:
                        return label
                pos = _skip_ws(masked, wend, newlines=True)
                continue
            if word in self.keywords:
                if self.chain_else and word == "else":
                    nxt = _skip_ws(masked, wend, newlines=True)
                    m2 = _WORD_RE.match(masked, nxt)
                    if m2 is not None and m2.group(0) in self.keywords and m2.group(0) != "else":
                        word, wend = m2.group(0), m2.end()
                return self._match_keyword(masked, i, word, wend)
            break
        if self.method_pattern:
            return self._match_method(masked, i, pos)
        return None

    def _match_keyword(
        self, masked: str, start: int, word: str, wend: int
    ) -> tuple[CompositeNode, int] | None:
        node_type = self.keywords[word]
        if word in self.label_keywords:
            return self._match_label(masked, start, word, wend)
        if self.family == "indent":
            colon = _find_header_colon(masked, wend)
            if colon is None:
                return None  # soft keyword used as a name ('match = 5')
            return CompositeNode(node_type, start, colon + 1), wend
        if self.family == "end":
            eol = masked.find("\n", wend)
            eol = len(masked) if eol == -1 else eol
            return CompositeNode(node_type, start, eol), wend
        # brace family
        brace = _find_body_brace(masked, wend, self.header_semicolon_ok)
        if brace is not None:
            return CompositeNode(node_type, start, brace + 1), wend
        return self._braceless_fallback(masked, start, word, wend, node_type)

    def _match_label(
        self, masked: str, start: int, word: str, wend: int
    ) -> tuple[CompositeNode, int] | None:
        node_type = self.keywords.get(word, "case_clause")
        j = wend
        depth = 0
        n = len(masked)
        while j < n:
            c = masked[j]
            if c in "([":
                depth += 1
            elif c in ")]":
                depth = max(depth - 1, 0)
            elif depth == 0 and c == ":":
                if j + 1 < n and masked[j + 1] == "=":
                    j += 2  # ':=' binding, not the label colon
                    continue
                return CompositeNode(node_type, start, j + 1), j + 1
            elif depth == 0 and (c in "{};" or c == "\n"):
                return None
            j += 1
        return None

    def _braceless_fallback(
        self, masked: str, start: int, word: str, wend: int, node_type: str
    ) -> tuple[CompositeNode, int] | None:
        """Header for one-statement bodies: 'if (x) y();' and PHP ':' syntax."""
        j = _skip_ws(masked, wend, newlines=True)
        if j < len(masked) and masked[j] == "(":
            close = _skip_balanced(masked, j)
            if close is not None:
                return CompositeNode(node_type, start, close), wend
            return None
        if word in ("else", "do", "try", "finally"):
            return CompositeNode(node_type, start, wend), wend
        return None

    def _match_method(
        self, masked: str, start: int, pos: int
    ) -> tuple[CompositeNode, int] | None:
        """Keywordless method/constructor headers: ``[type tokens] name ( … ) … {``."""
        n = len(masked)
        j = pos
        words = 0
        last_word_end = -1
        while j < n:
            if masked[j] in _WS or masked[j] == "\n":
                j += 1
                continue
            m = _WORD_RE.match(masked, j)
            if m is not None:
                words += 1
                last_word_end = m.end()
                j = m.end()
                continue
            c = masked[j]
            if c == "(":
                if words == 0 or last_word_end != _rstrip_ws(masked, j):
                    return None
                close = _skip_balanced(masked, j)
                if close is None:
                    return None
                return self._match_method_tail(masked, start, close)
            if c in ".<>,[]&":
                j += 1
                continue
            if c == "@" and self.annotations:
                skipped = self._skip_annotation(masked, j)
                if skipped is None:
                    return None
                j = skipped
                continue
            return None
        return None

    def _match_method_tail(
        self, masked: str, start: int, pos: int
    ) -> tuple[CompositeNode, int] | None:
        """After the parameter list: allow a throws-style clause, then require '{'."""
        n = len(masked)
        j = pos
        while j < n:
            c = masked[j]
            if c in _WS or c == "\n" or c == ",":
                j += 1
                continue
            m = _WORD_RE.match(masked, j)
            if m is not None:
                j = m.end()
                continue
            if c == "@" and self.annotations:
                skipped = self._skip_annotation(masked, j)
                if skipped is None:
                    return None
                j = skipped
                continue
            if c == "{":
                return CompositeNode("method_definition", start, j + 1), j + 1
            return None
        return None

    def _skip_annotation(self, masked: str, pos: int) -> int | None:
        """Skip ``@dotted.Name`` plus an optional balanced argument list."""
        j = pos + 1
        m = _WORD_RE.match(masked, j)
        if m is None:
            return None
        j = m.end()
        while j < len(masked) and masked[j] == ".":
            m = _WORD_RE.match(masked, j + 1)
            if m is None:
                break
            j = m.end()
        k = _skip_ws(masked, j, newlines=True)
        if k < len(masked) and masked[k] == "(":
            close = _skip_balanced(masked, k)
            if close is not None:
                return close
        return j


# ----------------------------------------------------------------------
# Scan helpers
# ----------------------------------------------------------------------


def _blank(out: list[str], a: int, b: int) -> None:
    for k in range(a, min(b, len(out))):
        if out[k] != "\n":
            out[k] = " "


def _skip_ws(s: str, i: int, newlines: bool = False) -> int:
    chars = _WS + ("\n" if newlines else "")
    while i < len(s) and s[i] in chars:
        i += 1
    return i


def _rstrip_ws(s: str, i: int) -> int:
    """Offset of the last non-whitespace run ending before ``i`` (exclusive)."""
    while i > 0 and (s[i - 1] in _WS or s[i - 1] == "\n"):
        i -= 1
    return i


def _skip_balanced(s: str, open_pos: int) -> int | None:
    """Position one past the parenthesis group opening at ``open_pos``."""
    depth = 0
    for j in range(open_pos, len(s)):
        if s[j] == "(":
            depth += 1
        elif s[j] == ")":
            depth -= 1
            if depth == 0:
                return j + 1
    return None


def _find_header_colon(masked: str, pos: int) -> int | None:
    """Depth-0 ':' ending an indent-family header; None if the line has none."""
    depth = 0
    n = len(masked)
    j = pos
    while j < n:
        c = masked[j]
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth = max(depth - 1, 0)
        elif c == ":" and depth == 0:
            return j
        elif c == "\n" and depth == 0:
            if j > 0 and masked[j - 1] == "\\":
                j += 1
                continue
            return None
        j += 1
    return None


def _find_body_brace(masked: str, pos: int, semicolon_ok: bool) -> int | None:
    """Depth-0 '{' opening a brace-family body; None when the header has none."""
    depth = 0
    n = len(masked)
    j = pos
    while j < n:
        c = masked[j]
        if c in "([":
            depth += 1
        elif c in ")]":
            depth = max(depth - 1, 0)
        elif depth == 0:
            if c == "{":
                return j
            if c == "}":
                return None
            if c == ";" and not semicolon_ok:
                return None
            if c == "=":
                prev = masked[j - 1] if j > 0 else ""
                nxt = masked[j + 1] if j + 1 < n else ""
                if prev not in ":=!<>" and nxt != "=":
                    return None  # assignment, not a header ('type A = int')
                if nxt == "=":
                    j += 1
        j += 1
    return None


def _mask_outside_php_tags(text: str, out: list[str]) -> None:
    """Blank HTML outside ``<?php … ?>`` regions (only when a tag is present)."""
    if "<?php" not in text:
        return
    pos = 0
    while True:
        open_tag = text.find("<?php", pos)
        if open_tag == -1:
            _blank(out, pos, len(text))
            return
        _blank(out, pos, open_tag)
        close_tag = text.find("?>", open_tag)
        if close_tag == -1:
            return
        pos = close_tag + 2


def _mask_heredocs(text: str, out: list[str], opener: re.Pattern[str]) -> None:
    for m in opener.finditer(text):
        ident = m.group("ident")
        body_start = text.find("\n", m.end())
        if body_start == -1:
            continue
        body_start += 1
        term = re.compile(rf"^[ \t]*{re.escape(ident)}[ \t;]*\r?$", re.MULTILINE)
        t = term.search(text, body_start)
        if t is None:
            continue  # not actually a heredoc (e.g. a shift expression)
        _blank(out, body_start, t.end())


# ----------------------------------------------------------------------
# Profile loading
# ----------------------------------------------------------------------

_CACHE: dict[tuple[str, str], Grammar] = {}
_EXT_CACHE: dict[str, dict[str, str]] = {}


def grammar_dir() -> Path:
    """Directory grammar assets are loaded from (env override or bundled)."""
    override = os.environ.get(GRAMMAR_DIR_ENV, "")
    return Path(override) if override else _DEFAULT_DIR


def _compile(profile: dict) -> Grammar:
    strings = tuple(
        sorted(
            (StringRule(**rule) for rule in profile.get("strings", [])),
            key=lambda r: -len(r.open),
        )
    )
    blocks = tuple(
        (bc["open"], bc["close"], bool(bc.get("line_start", False)))
        for bc in profile.get("block_comments", [])
    )
    return Grammar(
        name=profile["name"],
        family=profile["family"],
        extensions=tuple(profile.get("extensions", [])),
        line_comments=tuple(profile.get("line_comments", [])),
        block_comments=blocks,
        strings=strings,
        keywords=dict(profile.get("keywords", {})),
        label_keywords=frozenset(profile.get("label_keywords", [])),
        modifiers=frozenset(profile.get("modifiers", [])),
        method_pattern=bool(profile.get("method_pattern", False)),
        header_semicolon_ok=bool(profile.get("header_semicolon_ok", False)),
        annotations=bool(profile.get("annotations", False)),
        chain_else=bool(profile.get("chain_else", False)),
        quirks=tuple(profile.get("quirks", [])),
    )


def get_grammar(language: str) -> Grammar:
    """Load (and cache) the grammar profile for ``language``.

    Raises UnsupportedLanguage when no ``<language>.json`` asset exists in the
    active grammar directory.
    """
    directory = grammar_dir()
    key = (str(directory), language)
    if key in _CACHE:
        return _CACHE[key]
    path = directory / f"{language}.json"
    if not path.is_file():
        raise UnsupportedLanguage(f"no grammar asset for {language!r} in {directory}")
    grammar = _compile(json.loads(path.read_text(encoding="utf-8")))
    _CACHE[key] = grammar
    return grammar


def supported_languages() -> list[str]:
    """Languages with a grammar asset in the active directory."""
    return sorted(p.stem for p in grammar_dir().glob("*.json"))


def language_for_path(path: str | Path) -> str | None:
    """Guess the language from a file extension, or None."""
    directory = str(grammar_dir())
    if directory not in _EXT_CACHE:
        table: dict[str, str] = {}
        for lang in supported_languages():
            for ext in get_grammar(lang).extensions:
                table[ext] = lang
        _EXT_CACHE[directory] = table
    return _EXT_CACHE[directory].get(Path(path).suffix.lower())
