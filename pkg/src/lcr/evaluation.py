"""Ranking metrics and length-stratified evaluation reports.

MRR is the mean reciprocal rank of the ground truth over all queries; R@k
the fraction of queries whose ground truth lands in the top k.  Reports also
break MRR out over quantile buckets of ground-truth code token length, which
is where truncating encoders degrade.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from .errors import EmptyInput

DEFAULT_RECALL_KS = (1, 5, 10, 100)


@dataclass(frozen=True)
class QueryRecord:
    """One evaluation query with its ground-truth snippet."""

    query: str
    gt_id: str
    gt_token_length: int = 0


@dataclass
class BucketStats:
    lo: int  # inclusive token-length bound
    hi: int  # exclusive token-length bound
    count: int
    mrr: float


@dataclass
class EvalReport:
    total_queries: int
    mrr: float
    recalls: dict[int, float]
    buckets: list[BucketStats] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total_queries": self.total_queries,
            "mrr": self.mrr,
            "recalls": {f"r@{k}": v for k, v in sorted(self.recalls.items())},
            "buckets": [
                {"range": [b.lo, b.hi], "queries": b.count, "mrr": b.mrr}
                for b in self.buckets
            ],
        }


def mrr(ranks: Sequence[int]) -> float:
    """Mean of reciprocal ranks; every rank must be >= 1."""
    if len(ranks) == 0:
        raise EmptyInput("no ranks")
    return sum(1.0 / r for r in ranks) / len(ranks)


def recall_at_k(ranks: Sequence[int], k: int) -> float:
    """Fraction of queries whose ground truth ranked within the top k."""
    if len(ranks) == 0:
        raise EmptyInput("no ranks")
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for r in ranks if r <= k) / len(ranks)


def _bucket_index_groups(lengths: Sequence[int], n_buckets: int) -> list[list[int]]:
    """Quantile split of item indices by length; sizes differ by at most 1.

    Stable sort ascending by length; the first ``total mod n_buckets``
    buckets take the extra item, so 14918 items split 5 ways as
    2984/2984/2984/2983/2983.
    """
    if len(lengths) == 0:
        raise EmptyInput("no items to bucket")
    n_buckets = min(n_buckets, len(lengths))
    order = sorted(range(len(lengths)), key=lambda i: lengths[i])
    base, extra = divmod(len(order), n_buckets)
    groups: list[list[int]] = []
    offset = 0
    for i in range(n_buckets):
        size = base + (1 if i < extra else 0)
        groups.append(order[offset : offset + size])
        offset += size
    return groups


def bucket_by_length(
    queries: Sequence[QueryRecord], n_buckets: int = 5
) -> list[list[QueryRecord]]:
    """Quantile split by ground-truth token length, sizes differing by <= 1."""
    groups = _bucket_index_groups([q.gt_token_length for q in queries], n_buckets)
    return [[queries[i] for i in group] for group in groups]


def evaluate(
    rank_fn: Callable[[QueryRecord], int],
    queries: Sequence[QueryRecord],
    n_buckets: int = 5,
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
) -> EvalReport:
    """Rank every query's ground truth and aggregate MRR, R@k, and buckets.

    ``rank_fn`` must return the 1-based rank of the query's ground truth in
    the full candidate pool under a deterministic tie-break; it raises
    MissingGroundTruth when the ground truth is absent.
    """
    if len(queries) == 0:
        raise EmptyInput("no queries to evaluate")
    all_ranks = [rank_fn(q) for q in queries]
    report = EvalReport(
        total_queries=len(queries),
        mrr=mrr(all_ranks),
        recalls={k: recall_at_k(all_ranks, k) for k in recall_ks},
    )
    groups = _bucket_index_groups([q.gt_token_length for q in queries], n_buckets)
    bounds = [min(queries[i].gt_token_length for i in g) for g in groups]
    for gi, group in enumerate(groups):
        hi = (
            bounds[gi + 1]
            if gi + 1 < len(groups)
            else max(queries[i].gt_token_length for i in group) + 1
        )
        report.buckets.append(
            BucketStats(
                lo=bounds[gi],
                hi=hi,
                count=len(group),
                mrr=mrr([all_ranks[i] for i in group]),
            )
        )
    return report


def render_table(report: EvalReport) -> str:
    """Text table mirroring the length-bucket report layout."""
    lines = [
        f"{'Token length':>16}  {'#Queries':>9}  {'MRR':>8}",
    ]
    for b in report.buckets:
        lines.append(f"{f'[{b.lo}, {b.hi})':>16}  {b.count:>9}  {b.mrr:>8.4f}")
    recalls = "  ".join(f"R@{k}={v:.4f}" for k, v in sorted(report.recalls.items()))
    lines.append(f"overall MRR {report.mrr:.4f}  {recalls}  ({report.total_queries} queries)")
    return "\n".join(lines)
