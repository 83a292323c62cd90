"""JSON envelopes and fixed-header CSV tables for CLI output."""

from __future__ import annotations

import csv
import io
import json
import math

SCHEMA = "gcdb-lab/1"

STAT_COLUMNS = ("op", "b", "N", "k", "x", "raw_sum", "estimate", "target", "abs_error", "provenance")
VERDICT_COLUMNS = ("r", "s", "kind", "status", "detail")


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return v.item()
    return v


def to_json(command: str, config: dict, results: list[dict]) -> str:
    doc = {"schema": SCHEMA, "command": command, "config": config, "results": results}
    return json.dumps(_clean(doc), sort_keys=True, indent=2) + "\n"


def to_csv(rows: list[dict], columns=STAT_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: _clean(row.get(c, "")) for c in columns})
    return buf.getvalue()
