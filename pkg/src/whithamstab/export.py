"""Deterministic CSV/JSON tables.

Every table has a fixed column order, floats written with 17 significant
digits, and ``#``-prefixed ``key=value`` metadata lines ahead of the header.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

__all__ = ["format_value", "to_csv", "to_json", "render"]


def format_value(v: Any) -> str:
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    if isinstance(v, (tuple, list)):
        return ",".join(format_value(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v: Any):
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else format_value(v)
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Mapping):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if v is None:
        return None
    return str(v)


def to_csv(columns: Sequence[str], rows: Iterable[Sequence], meta: Mapping[str, Any] = ()) -> str:
    buf = io.StringIO()
    for key, value in dict(meta).items():
        buf.write(f"# {key}={format_value(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def to_json(columns: Sequence[str], rows: Iterable[Sequence], meta: Mapping[str, Any] = ()) -> str:
    doc = {
        "meta": _jsonable(dict(meta)),
        "columns": list(columns),
        "rows": [_jsonable(list(r)) for r in rows],
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render(fmt: str, columns, rows, meta=()) -> str:
    rows = list(rows)
    if fmt == "json":
        return to_json(columns, rows, meta)
    return to_csv(columns, rows, meta)
