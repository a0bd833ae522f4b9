"""JSON (de)serialization of matrices: ``{"rows": R, "cols": C, "data": [[...], ...]}``."""

from __future__ import annotations

import json
import math
from numbers import Real

import numpy as np

from .errors import MatrixFormatError

__all__ = ["matrix_from_json", "matrix_to_json", "load_json", "load_matrix", "dumps"]


def matrix_from_json(obj, name: str = "matrix") -> np.ndarray:
    """Validate a decoded Matrix object; every error names the offending row/col."""
    if not isinstance(obj, dict):
        raise MatrixFormatError(f"{name}: expected an object with rows, cols, data")
    missing = [key for key in ("rows", "cols", "data") if key not in obj]
    if missing:
        raise MatrixFormatError(f"{name}: missing field(s) {', '.join(missing)}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    for key, value in (("rows", rows), ("cols", cols)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise MatrixFormatError(f"{name}: {key} must be a non-negative integer, got {value!r}")
    if not isinstance(data, list) or len(data) != rows:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise MatrixFormatError(f"{name}: data must hold {rows} rows, got {got}")
    out = np.empty((rows, cols))
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise MatrixFormatError(f"{name}: row {i} must hold {cols} entries, got {got}")
        for j, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
                raise MatrixFormatError(f"{name}: bad entry {value!r} at row {i}, col {j}")
            out[i, j] = float(value)
    return out


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": [[float(v) for v in row] for row in m]}


def load_json(path: str):
    """Read JSON from ``path`` (``-`` means stdin)."""
    import sys

    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno}, column {exc.colno})") from None


def load_matrix(path: str) -> np.ndarray:
    return matrix_from_json(load_json(path), name=path)


def _plain(obj):
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_json(obj)
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON; floats use Python's shortest round-trip repr."""
    return json.dumps(_plain(obj), indent=2, allow_nan=False)
