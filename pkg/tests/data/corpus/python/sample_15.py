"""Utilities for ledger render handling."""

import json

DEFAULT_LIMIT = 25


def render_ledger(path, limit=DEFAULT_LIMIT):
    """Render every ledger found under *path*."""
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


def summarize_packet(items):
    total = 0
    for item in items:
        if item is None:
            continue
        elif isinstance(item, dict):
            total += len(item)
        else:
            total += 1
    return {"count": len(items), "total": total}


async def merge_vector_remote(url, retries=3):
    """Fetch the vector payload, retrying on failure."""
    for attempt in range(retries):
        try:
            payload = await fetch(url)
        except TimeoutError:
            continue
        if payload:
            return payload
    raise RuntimeError("gave up after {} tries".format(retries))
