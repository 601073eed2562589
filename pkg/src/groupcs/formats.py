"""File formats: matrix CSV and JSON with 17 significant digits.

Every float written by the toolkit goes through :func:`fmt`, so reruns with
the same inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no infinities; keep them readable as strings
        return fmt(x) if math.isfinite(x) else json.dumps(fmt(x))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits and keys in insertion order."""
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def write_matrix_csv(path, A, header: bool = True) -> None:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    lines = [f"{A.shape[0]},{A.shape[1]}"] if header else []
    lines += [",".join(fmt(v) for v in row) for row in A]
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    """Row-major CSV; a leading integer line ``m,n`` is taken as a shape header."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    shape = None
    if rows and len(rows[0]) == 2 and all(c.strip().isdigit() for c in rows[0]):
        body = rows[1:]
        m, n = int(rows[0][0]), int(rows[0][1])
        # a 2-column matrix of integers could look like a header; trust it only if it fits
        if len(body) == m and all(len(r) == n for r in body):
            shape, rows = (m, n), body
    A = np.array([[float(c) for c in r] for r in rows], dtype=float)
    if A.size and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("ragged matrix CSV")
    if shape is not None and A.shape != shape:
        raise DimensionMismatch(f"header says {shape}, body is {A.shape}")
    return A


def write_vector_csv(path, x) -> None:
    Path(path).write_text("".join(fmt(v) + "\n" for v in np.ravel(x)))


def read_vector_csv(path) -> np.ndarray:
    """One value per line, or a single comma-separated row."""
    A = read_matrix_csv(path)
    return A.ravel()


def write_rows_csv(path, columns, rows, version_line: str | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if version_line:
            fh.write(version_line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return str(v)
