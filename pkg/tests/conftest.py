from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).parent / "data"
CORPUS_DIR = DATA_DIR / "corpus"


@pytest.fixture(scope="session")
def corpus_files() -> list[tuple[str, Path]]:
    """(language, path) for every bundled sample source file."""
    files = [
        (path.parent.name, path)
        for path in sorted(CORPUS_DIR.rglob("sample_*"))
        if path.is_file()
    ]
    assert len(files) == 100
    return files


def planted_block_dataset(seed: int = 0, n_codes: int = 128, dim: int = 128, k: int = 5):
    """Training set where exactly one block per code shares the query's tokens.

    Queries draw from a small query vocabulary; the planted block repeats the
    query's tokens while the other k-1 blocks use a disjoint code vocabulary,
    so a trained attention head can be scored against the known block index.
    Returns (pairs, planted_indices) with pairs shaped for ``training.train``.
    """
    from lcr.encoding import EncoderSpec, encode_tokens

    rng = np.random.default_rng(seed)
    query_vocab = [f"query{i}word" for i in range(40)]
    code_vocab = [f"code{i}token" for i in range(200)]
    spec = EncoderSpec(dim=dim)
    pairs = []
    planted = []
    for _ in range(n_codes):
        q_words = [query_vocab[i] for i in rng.choice(len(query_vocab), 6, replace=False)]
        query_emb = encode_tokens(q_words, spec)
        planted_idx = int(rng.integers(k))
        blocks = []
        for j in range(k):
            if j == planted_idx:
                toks = q_words + [
                    code_vocab[i] for i in rng.choice(len(code_vocab), 2, replace=False)
                ]
            else:
                toks = [code_vocab[i] for i in rng.choice(len(code_vocab), 12, replace=False)]
            blocks.append(encode_tokens(toks, spec))
        pairs.append((query_emb, blocks))
        planted.append(planted_idx)
    return pairs, planted
