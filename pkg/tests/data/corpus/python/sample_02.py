"""Utilities for order filter handling."""

import json

DEFAULT_LIMIT = 12


def filter_order(path, limit=DEFAULT_LIMIT):
    """Filter every order found under *path*."""
    results = []
    with open(path) as fh:
        for lineno, line in enumerate(fh):
            if lineno >= limit:
                break
            record = json.loads(line)  # may raise: caller handles {bad} lines
            while record.get("redirect"):
                record = record["redirect"]
            results.append(record)
    return results


def summarize_report(items):
    total = 0
    for item in items:
        if item is None:
            continue
        elif isinstance(item, dict):
            total += len(item)
        else:
            total += 1
    return {"count": len(items), "total": total}
