import numpy as np
import pytest

from lcr.errors import EmptySource, UnsupportedLanguage
from lcr.grammar import get_grammar
from lcr.splitting import SourceSnippet, SplitStrategy, ast_partition, split
from lcr.tokenizer import tokenize


def snip(text: str, language: str = "python", sid: str = "s") -> SourceSnippet:
    return SourceSnippet(id=sid, language=language, text=text)


class TestSpaceStrategy:
    def test_paper_example(self):
        pieces = split(snip("def read_image_file"), SplitStrategy("space"))
        assert [p.text for p in pieces] == ["def", "read_image_file"]

    def test_pieces_are_maximal_runs(self):
        pieces = split(snip("a  bb\tccc\nd"), SplitStrategy("space"))
        assert [p.text for p in pieces] == ["a", "bb", "ccc", "d"]


class TestLineStrategy:
    def test_blank_lines_dropped(self):
        pieces = split(snip("x\n\ny"), SplitStrategy("line"))
        assert [p.text for p in pieces] == ["x", "y"]

    def test_spans_reslice_to_piece_text(self):
        # Oracle: re-slice the source with the returned spans.
        text = "a = 1\nb = 2\nc = 3"
        pieces = split(snip(text), SplitStrategy("line"))
        assert [(p.start, p.end) for p in pieces] == [(0, 5), (6, 11), (12, 17)]
        for p in pieces:
            assert text[p.start : p.end] == p.text


class TestTokenStrategy:
    def test_pieces_are_tokenizer_output(self):
        text = "readImage(path_name)"
        pieces = split(snip(text), SplitStrategy("token"))
        toks = tokenize(text)
        assert [(p.start, p.end) for p in pieces] == [(t.start, t.end) for t in toks]
        assert [p.text for p in pieces] == ["read", "Image", "(", "path", "name", ")"]


class TestAstPartition:
    def test_def_if_header_pieces(self):
        text = "def f():\n    if x:\n        return 1"
        pieces = ast_partition(snip(text))
        assert [p.text for p in pieces] == ["def f():", "if x:", "return 1"]
        # Oracle: every header reported by the grammar starts a piece.
        nodes = get_grammar("python").composite_nodes(text)
        piece_starts = {p.start for p in pieces}
        assert {n.start for n in nodes} <= piece_starts

    def test_flat_snippet_single_piece(self):
        pieces = ast_partition(snip("x = 1\ny = 2"))
        assert len(pieces) == 1
        assert pieces[0].text == "x = 1\ny = 2"

    def test_unsupported_language(self):
        with pytest.raises(UnsupportedLanguage):
            ast_partition(snip("x = 1", language="fortran"))

    def test_empty_source(self):
        with pytest.raises(EmptySource):
            split(snip("   \n  "), SplitStrategy("ast"))
        with pytest.raises(EmptySource):
            split(snip(""), SplitStrategy("line"))

    def test_deterministic(self):
        text = "def f():\n    for i in range(3):\n        yield i"
        assert ast_partition(snip(text)) == ast_partition(snip(text))


def _assert_partition_invariants(text: str, pieces) -> None:
    assert len(pieces) >= 1
    pos = 0
    rebuilt = []
    for i, p in enumerate(pieces):
        assert p.index == i
        assert p.start < p.end
        assert text[p.start : p.end] == p.text
        gap = text[pos : p.start]
        assert gap.strip() == "", f"non-whitespace gap {gap!r}"
        rebuilt.append(gap)
        rebuilt.append(p.text)
        pos = p.end
    tail = text[pos:]
    assert tail.strip() == ""
    assert "".join(rebuilt) + tail == text


class TestPartitionProperties:
    def test_corpus_roundtrip_and_header_alignment(self, corpus_files):
        for language, path in corpus_files:
            text = path.read_text(encoding="utf-8")
            pieces = ast_partition(snip(text, language=language, sid=str(path)))
            _assert_partition_invariants(text, pieces)
            piece_starts = {p.start for p in pieces}
            for node in get_grammar(language).composite_nodes(text):
                assert node.start in piece_starts, (path, node)

    def test_ordering_nonoverlap_randomized(self):
        rng = np.random.default_rng(42)
        alphabet = list("abc def(){}:\n\t\"'#xyz01_")
        for _ in range(200):
            n = int(rng.integers(1, 120))
            text = "".join(rng.choice(alphabet) for _ in range(n))
            if not text.strip():
                continue
            for kind in ("space", "token", "line", "ast"):
                pieces = split(snip(text), SplitStrategy(kind))
                for a, b in zip(pieces, pieces[1:]):
                    assert a.start < b.start
                    assert a.end <= b.start
                if kind in ("line", "ast"):
                    _assert_partition_invariants(text, pieces)
