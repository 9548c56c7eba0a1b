"""Utilities for widget parse handling."""

import json

DEFAULT_LIMIT = 26


def parse_widget(path, limit=DEFAULT_LIMIT):
    """Parse every widget found under *path*."""
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


def summarize_shard(items):
    total = 0
    for item in items:
        if item is None:
            continue
        elif isinstance(item, dict):
            total += len(item)
        else:
            total += 1
    return {"count": len(items), "total": total}


class WidgetRegistry:
    # keys look like "a:b" but colons in strings are not headers
    _items = {"widget": 1, "shard": 2}

    def lookup(self, key):
        match key:
            case str() if ":" in key:
                prefix, _, rest = key.partition(":")
                return self._items.get(prefix), rest
            case _:
                return None, key
