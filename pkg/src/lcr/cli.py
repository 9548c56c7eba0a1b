"""Command-line surface tying the pipeline together.

Subcommands: split, index, search, eval, train-fusion, gen-synthetic.  All
reports go to stdout as JSON; logs and the human-readable eval table go to
stderr.  Every failure maps to a nonzero exit with a machine-readable
``{"error": name, "message": …}`` object.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bm25 as bm25_mod
from . import index as index_mod
from .config import PipelineConfig
from .corpus import CorpusRecord, ingest_corpus, write_corpus
from .encoding import EncoderSpec, load_embedding_table
from .errors import FingerprintMismatch, LcrError
from .evaluation import QueryRecord, evaluate, render_table
from .fusion import init_params, load_params, save_params
from .grammar import language_for_path, supported_languages
from .scheduler import table_block_encoder
from .splitting import SourceSnippet, SplitStrategy, split
from .synthetic import generate_corpus
from .tokenizer import token_count
from .training import TrainConfig, train
from .windowing import DEFAULT_STEP, DEFAULT_WINDOW

logger = logging.getLogger(__name__)

_TAIL_FLAGS = {"floor": "paper_floor", "include": "include_tail"}
_FUSION_CHOICES = [
    "mean", "max", "attn1", "attn2",
    "attn1+mean", "attn2+mean", "attn1+max", "attn2+max",
]


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--split", choices=["space", "token", "line", "ast"], default=None)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--step", type=int, default=None)
    p.add_argument("--tail", choices=["floor", "include"], default=None)
    p.add_argument("--fusion", choices=_FUSION_CHOICES, default=None)
    p.add_argument("--encoder", default=None, help="builtin or table:PATH")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--params", default=None, help="fusion params file")
    p.add_argument("--truncate", type=int, default=None,
                   help="truncation-baseline mode: encode only the first N tokens")
    p.add_argument("--metric", choices=["cosine", "euclidean"], default=None)


def _flags_given(args: argparse.Namespace) -> dict:
    keys = ("split", "window", "step", "tail", "fusion", "encoder", "dim",
            "batch_size", "seed", "truncate", "metric")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _build_config(args: argparse.Namespace) -> tuple[PipelineConfig, object | None]:
    """PipelineConfig (defaults + flags) plus the loaded table, if any."""
    table = None
    encoder_flag = args.encoder or "builtin"
    if encoder_flag.startswith("table:"):
        table = load_embedding_table(encoder_flag.split(":", 1)[1])
        spec = EncoderSpec(kind="external_table", dim=table.dim,
                           table_path=encoder_flag.split(":", 1)[1])
    elif encoder_flag == "builtin":
        spec = EncoderSpec(kind="builtin_hash", dim=args.dim or 256)
    else:
        raise ValueError(f"unknown encoder {encoder_flag!r} (use builtin or table:PATH)")
    cfg = PipelineConfig(
        split=args.split or "ast",
        window=args.window or DEFAULT_WINDOW,
        step=args.step or DEFAULT_STEP,
        tail=_TAIL_FLAGS[args.tail or "floor"],
        fusion=args.fusion or "attn1+mean",
        encoder=spec,
        batch_size=args.batch_size or 256,
        seed=args.seed if args.seed is not None else 0,
        truncate=args.truncate or 0,
        metric=args.metric or "cosine",
    )
    return cfg, table


def _load_or_init_params(args: argparse.Namespace, cfg: PipelineConfig):
    if getattr(args, "params", None):
        return load_params(args.params)
    return init_params(cfg.fusion, cfg.encoder.dim, seed=cfg.seed)


def _emit(data: dict) -> None:
    json.dump(data, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def _cmd_split(args: argparse.Namespace) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    language = args.language or language_for_path(args.file)
    if language is None:
        raise ValueError(
            f"cannot infer language for {args.file}; pass --language "
            f"(one of {', '.join(supported_languages())})"
        )
    snippet = SourceSnippet(id=str(args.file), language=language, text=text)
    for piece in split(snippet, SplitStrategy(args.strategy)):
        _emit({"index": piece.index, "start": piece.start, "end": piece.end,
               "text": piece.text})
    return 0


def _corpus_snippets(path: str) -> list[SourceSnippet]:
    ingest = ingest_corpus(path)
    return [r.snippet() for r in ingest.records]


def _cmd_index(args: argparse.Namespace) -> int:
    cfg, table = _build_config(args)
    params = _load_or_init_params(args, cfg)
    snippets = _corpus_snippets(args.corpus)
    encoder = table_block_encoder(cfg.encoder, table) if table is not None else None
    idx, encoded = index_mod.build_index(
        snippets, cfg, params, encoder=encoder,
        missing_fails_snippet=table is not None,
    )
    index_mod.save_index(idx, args.out)
    _emit({
        "entries": len(idx),
        "skipped": [{"id": sid, "error": err} for sid, err in encoded.skipped],
        "line_fallbacks": len(encoded.fallbacks),
        "fingerprint": idx.fingerprint,
        "out": str(args.out),
    })
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    idx = index_mod.load_index(args.index)
    given = _flags_given(args)
    if given:
        cfg, _ = _build_config(args)
        expected = cfg.fingerprint(None)
        expected.pop("params_hash")
        checked = {k: v for k, v in expected.items()
                   if _flag_touches_fingerprint(k, given)}
        index_mod.check_fingerprint(idx, checked)
    table = None
    if args.table:
        table = load_embedding_table(args.table)
    qvec = index_mod.query_vector(
        idx, args.query or "",
        table_lookup=None if table is None else table.lookup,
        query_id=args.query_id,
    )
    result = index_mod.search_vector(idx, qvec, top_k=args.top_k)
    _emit({"results": [{"id": sid, "score": score} for sid, score in result.results]})
    return 0


def _flag_touches_fingerprint(key: str, given: dict) -> bool:
    if key == "encoder":
        return "encoder" in given or "dim" in given
    return key in given


def _queries_from_records(records: list[CorpusRecord]) -> list[QueryRecord]:
    queries = []
    for r in records:
        if r.query and r.query.strip():
            length = r.token_length if r.token_length is not None else token_count(r.code)
            queries.append(QueryRecord(query=r.query, gt_id=r.id, gt_token_length=length))
    if not queries:
        raise ValueError("corpus has no records with a paired query")
    return queries


def _cmd_eval(args: argparse.Namespace) -> int:
    ingest = ingest_corpus(args.corpus)
    records = ingest.records
    queries = _queries_from_records(records)
    cfg, table = _build_config(args)

    if args.method == "bm25":
        ranker = bm25_mod.build_bm25([(r.id, r.code) for r in records])
        rank_fn = lambda q: ranker.rank_of(q.query, q.gt_id)  # noqa: E731
        fingerprint: dict = {"method": "bm25", "k1": ranker.k1, "b": ranker.b}
    else:
        if args.method == "truncated" and cfg.truncate == 0:
            cfg = replace(cfg, truncate=256)
        if args.index:
            idx = index_mod.load_index(args.index)
        else:
            params = _load_or_init_params(args, cfg)
            encoder = table_block_encoder(cfg.encoder, table) if table is not None else None
            idx, _ = index_mod.build_index(
                [r.snippet() for r in records], cfg, params, encoder=encoder,
                missing_fails_snippet=table is not None,
            )
        enc = idx.fingerprint.get("encoder", {})
        if enc.get("kind") == "external_table" and table is None:
            raise FingerprintMismatch("table-encoded index needs --encoder table:PATH")
        rank_fn = lambda q: index_mod.rank_of(  # noqa: E731
            idx,
            index_mod.query_vector(
                idx, q.query,
                table_lookup=None if table is None else table.lookup,
                query_id=q.gt_id,
            ),
            q.gt_id,
        )
        fingerprint = idx.fingerprint

    report = evaluate(rank_fn, queries, n_buckets=args.buckets)
    payload = {"config": fingerprint, **report.to_dict()}
    if args.out:
        Path(args.out).write_text(json.dumps(payload, sort_keys=True) + "\n",
                                  encoding="utf-8")
    _emit(payload)
    print(render_table(report), file=sys.stderr)
    return 0


def _cmd_train_fusion(args: argparse.Namespace) -> int:
    cfg, table = _build_config(args)
    params = _load_or_init_params(args, cfg)
    ingest = ingest_corpus(args.corpus, drop_empty_query=True)
    from .training import pairs_from_records

    pairs, skipped = pairs_from_records(ingest.records, cfg, table=table)
    tcfg = TrainConfig(
        batch_size=args.train_batch_size,
        max_blocks_per_code=args.max_blocks,
        epochs=args.epochs,
        learning_rate=args.lr,
        temperature=args.temperature,
        seed=cfg.seed,
    )
    result = train(pairs, tcfg, params)
    save_params(result.params, args.out)
    if args.loss_csv:
        lines = ["epoch,loss"] + [
            f"{i + 1},{repr(loss)}" for i, loss in enumerate(result.epoch_losses)
        ]
        Path(args.loss_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit({
        "pairs": len(pairs),
        "skipped": skipped,
        "epochs": tcfg.epochs,
        "final_loss": result.epoch_losses[-1],
        "params": str(args.out),
    })
    return 0


def _cmd_gen_synthetic(args: argparse.Namespace) -> int:
    records = generate_corpus(args.n, seed=args.seed, planted_frac=args.planted_frac)
    write_corpus(records, args.out)
    _emit({"records": len(records), "planted": sum(1 for r in records if r.planted),
           "out": str(args.out)})
    return 0


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="split one source file into pieces (JSON lines)")
    p.add_argument("file")
    p.add_argument("--strategy", choices=["space", "token", "line", "ast"], default="ast")
    p.add_argument("--language", default=None)
    p.set_defaults(fn=_cmd_split)

    p = sub.add_parser("index", help="build a searchable index from a JSONL corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    _add_pipeline_flags(p)
    p.set_defaults(fn=_cmd_index)

    p = sub.add_parser("search", help="rank index entries against a query")
    p.add_argument("--index", required=True)
    p.add_argument("--query", default=None)
    p.add_argument("--query-id", default=None, help="row id for table-encoded queries")
    p.add_argument("--table", default=None, help="embedding table for table-encoded queries")
    p.add_argument("--top-k", type=int, default=10)
    _add_pipeline_flags(p)
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("eval", help="MRR / R@k evaluation with length buckets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--index", default=None, help="evaluate a prebuilt index file")
    p.add_argument("--method", choices=["fused", "truncated", "bm25"], default="fused")
    p.add_argument("--buckets", type=int, default=5)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--out", default=None, help="also write the JSON report here")
    _add_pipeline_flags(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("train-fusion", help="train the attention fusion head")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output fusion params file")
    p.add_argument("--loss-csv", default=None)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--train-batch-size", type=int, default=64)
    p.add_argument("--max-blocks", type=int, default=6)
    p.add_argument("--temperature", type=float, default=0.05)
    _add_pipeline_flags(p)
    p.set_defaults(fn=_cmd_train_fusion)

    p = sub.add_parser("gen-synthetic", help="generate a planted-keyword corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--planted-frac", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_gen_synthetic)
    return parser


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the exit status."""
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except LcrError as exc:
        _emit({"error": exc.name, "message": str(exc)})
        return 1
    except (ValueError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
