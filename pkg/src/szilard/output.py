"""CSV and JSON writers.

CSV: ``#``-prefixed metadata lines (``# key: <json>``), a header row, then
one row per grid point with 12 significant digits.  JSON: ``{"meta": ...,
"records": [...]}`` with full-precision floats (non-finite values as null).
"""
import json
import math

import numpy as np


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if hasattr(value, "value") and not isinstance(value, (str, int, bool)):
        return value.value
    return value


def _fmt(value):
    if value is None:
        return "nan"
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"


def columns_to_records(columns):
    names = list(columns)
    size = len(next(iter(columns.values()))) if columns else 0
    return [{name: columns[name][k] for name in names} for k in range(size)]


def write_csv(stream, columns, meta):
    for key, value in meta.items():
        stream.write(f"# {key}: {json.dumps(_plain(value), sort_keys=True)}\n")
    names = list(columns)
    stream.write(",".join(names) + "\n")
    for record in columns_to_records(columns):
        stream.write(",".join(_fmt(record[name]) for name in names) + "\n")


def write_json(stream, columns, meta):
    payload = {"meta": _plain(meta), "records": _plain(columns_to_records(columns))}
    json.dump(payload, stream, indent=1, sort_keys=False, allow_nan=False)
    stream.write("\n")


def read_csv(stream):
    """Parse a file written by ``write_csv`` back into (columns, meta)."""
    meta, header, rows = {}, None, []
    for line in stream:
        line = line.rstrip("\n")
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = json.loads(value)
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(x) for x in line.split(",")])
    data = np.array(rows, dtype=float).reshape(len(rows), len(header or []))
    return {name: data[:, k] for k, name in enumerate(header or [])}, meta


WRITERS = {"csv": write_csv, "json": write_json}
