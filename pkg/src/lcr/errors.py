"""Exception types shared across the pipeline.

Every error raised by a pipeline stage is a subclass of ``LcrError`` so the
CLI can map failures to a machine-readable name and a nonzero exit code.
"""

from __future__ import annotations


class LcrError(Exception):
    """Base class for all toolkit errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class EmptySource(LcrError):
    """Snippet text is empty (or whitespace-only) where content is required."""


class UnsupportedLanguage(LcrError):
    """No grammar profile exists for the requested language."""


class ParseFailure(LcrError):
    """The grammar layer could not produce any structure for a snippet."""


class ZeroVector(LcrError):
    """An encoder produced (or was asked to normalize) an all-zero vector."""


class MissingEmbedding(LcrError):
    """An external embedding table has no row for the requested id."""


class DimMismatch(LcrError):
    """A vector's length disagrees with the declared dimension."""


class MalformedFile(LcrError):
    """A file does not conform to its documented format."""


class EmptyInput(LcrError):
    """An aggregate operation received an empty collection."""


class ShapeMismatch(LcrError):
    """Parameter/embedding shapes are inconsistent."""


class EmptyBatch(LcrError):
    """A batch operation received zero items."""


class LengthMismatch(LcrError):
    """A flat embedding list disagrees with its code-to-block map."""


class NonFiniteLoss(LcrError):
    """Training encountered a NaN/inf loss; carries the offending batch id."""

    def __init__(self, batch_id: int) -> None:
        super().__init__(f"non-finite loss in batch {batch_id}")
        self.batch_id = batch_id


class MissingGroundTruth(LcrError):
    """An evaluation query's ground-truth id is absent from the candidate pool."""

    def __init__(self, snippet_id: str) -> None:
        super().__init__(f"ground truth {snippet_id!r} not in candidate pool")
        self.snippet_id = snippet_id


class FingerprintMismatch(LcrError):
    """Query-side configuration disagrees with the index fingerprint."""


class AllSnippetsFailed(LcrError):
    """Every snippet in a corpus failed the pipeline; no index can be built."""


class AllLinesMalformed(LcrError):
    """Every line of a corpus file failed to parse."""
