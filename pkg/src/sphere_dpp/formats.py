"""Text formats: point CSV with a JSON metadata header, row tables, JSON reports.

Every writer returns a string built with fixed key order and repr-exact
floats, so equal inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .errors import DomainError
from .sampling import PointConfiguration


def _clean(value):
    """JSON-safe value: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def metadata_line(meta: dict) -> str:
    return f"# {json.dumps(_clean(meta), sort_keys=True)}\n" if meta else ""


def rows_to_csv(rows: list[dict], columns: list[str], meta: dict | None = None) -> str:
    buf = io.StringIO()
    buf.write(metadata_line(meta or {}))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def rows_to_json(rows: list[dict], columns: list[str], meta: dict | None = None) -> str:
    return dumps_json({"meta": meta or {}, "rows": [{c: row.get(c) for c in columns} for row in rows]})


def points_to_csv(x: PointConfiguration, meta: dict) -> str:
    """Points as CSV, one coordinate per column, preceded by '# {json}' header lines."""
    columns = [f"x{i}" for i in range(x.d + 1)]
    rows = [dict(zip(columns, p)) for p in x.points.tolist()]
    return rows_to_csv(rows, columns, {"d": x.d, **meta})


def points_to_json(x: PointConfiguration, meta: dict) -> str:
    return dumps_json({"meta": {"d": x.d, **meta}, "points": x.points.tolist()})


def parse_points_csv(text: str) -> PointConfiguration:
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            meta.update(json.loads(line[1:]))
        elif line.strip():
            body.append(line)
    if "d" not in meta:
        raise DomainError("point file lacks the '# {\"d\": ...}' header")
    rows = list(csv.reader(body))[1:]
    pts = np.array([[float(v) for v in r] for r in rows], dtype=float).reshape(-1, meta["d"] + 1)
    return PointConfiguration(int(meta["d"]), pts, meta)


def read_points(path) -> PointConfiguration:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        meta = obj.get("meta", {})
        return PointConfiguration(int(meta["d"]), np.array(obj["points"], dtype=float), meta)
    return parse_points_csv(text)
