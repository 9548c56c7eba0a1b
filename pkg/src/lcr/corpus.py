"""JSON-lines corpus ingestion.

One record per line with fields ``id``, ``language``, ``code`` and the
optional ``query`` (paired natural-language description) and ``token_length``
fields.  Malformed lines are counted and skipped, never fatal, unless the
whole file is bad.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import AllLinesMalformed
from .splitting import SourceSnippet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    language: str
    code: str
    query: str | None = None
    token_length: int | None = None
    planted: bool | None = None

    def snippet(self) -> SourceSnippet:
        return SourceSnippet(id=self.id, language=self.language, text=self.code)

    def to_json(self) -> str:
        data: dict = {"id": self.id, "language": self.language, "code": self.code}
        if self.query is not None:
            data["query"] = self.query
        if self.token_length is not None:
            data["token_length"] = self.token_length
        if self.planted is not None:
            data["planted"] = self.planted
        return json.dumps(data, sort_keys=True)


@dataclass
class IngestResult:
    records: list[CorpusRecord]
    skipped_lines: list[int]


def ingest_corpus(path: str | Path, drop_empty_query: bool = False) -> IngestResult:
    """Parse a JSONL corpus file; bad lines land in ``skipped_lines``.

    Raises FileNotFoundError for a missing file and AllLinesMalformed when
    not a single line parses.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(path)
    records: list[CorpusRecord] = []
    skipped: list[int] = []
    seen_ids: set[str] = set()
    total = 0
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            total += 1
            record = _parse_line(line, lineno, seen_ids)
            if record is None:
                skipped.append(lineno)
                continue
            if drop_empty_query and not (record.query or "").strip():
                skipped.append(lineno)
                continue
            seen_ids.add(record.id)
            records.append(record)
    if total > 0 and not records:
        raise AllLinesMalformed(f"{path}: no usable records among {total} lines")
    if skipped:
        logger.warning("%s: skipped %d malformed/filtered lines: %s",
                       path, len(skipped), skipped[:20])
    return IngestResult(records=records, skipped_lines=skipped)


def _parse_line(line: str, lineno: int, seen_ids: set[str]) -> CorpusRecord | None:
    try:
        data = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(data, dict):
        return None
    try:
        rid, language, code = str(data["id"]), str(data["language"]), str(data["code"])
    except KeyError:
        return None
    if rid in seen_ids or not code.strip():
        return None
    query = data.get("query")
    token_length = data.get("token_length")
    planted = data.get("planted")
    return CorpusRecord(
        id=rid,
        language=language,
        code=code,
        query=None if query is None else str(query),
        token_length=None if token_length is None else int(token_length),
        planted=None if planted is None else bool(planted),
    )


def write_corpus(records: list[CorpusRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")
