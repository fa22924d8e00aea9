"""JSON wire formats for matrices and vectors, plus deterministic dumping.

* complex matrix: ``{"n": 3, "rows": [[[re, im], ...], ...]}`` (row-major)
* complex vector: ``[[re, im], ...]``
* real vector: ``[x0, x1, ...]``

Floats are written with 17 significant digits so reruns diff cleanly.
"""

from __future__ import annotations

import json
import math

import numpy as np


class EncodingError(ValueError):
    """Malformed JSON payload. ``location`` is a JSON-pointer-like path."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location or '/'}: {message}")
        self.location = location or "/"


def _pair(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise EncodingError("expected a [re, im] pair of numbers", where)
    re, im = float(value[0]), float(value[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise EncodingError("non-finite entry", where)
    return complex(re, im)


def encode_matrix(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    rows = [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return {"n": int(a.shape[0]), "rows": rows}


def decode_matrix(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise EncodingError("expected an object with keys 'n' and 'rows'")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise EncodingError("'n' must be a positive integer", "/n")
    rows = obj.get("rows")
    if not isinstance(rows, list) or len(rows) != n:
        raise EncodingError(f"'rows' must be a list of {n} rows", "/rows")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise EncodingError(f"row must have {n} entries", f"/rows/{i}")
        for j, val in enumerate(row):
            out[i, j] = _pair(val, f"/rows/{i}/{j}")
    return out


def encode_complex_vector(z: np.ndarray) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex).ravel()]


def decode_complex_vector(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise EncodingError("expected a non-empty list of [re, im] pairs")
    return np.array([_pair(v, f"/{i}") for i, v in enumerate(obj)], dtype=complex)


def encode_real_vector(p: np.ndarray) -> list:
    return [float(x) for x in np.asarray(p, dtype=float).ravel()]


def decode_real_vector(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise EncodingError("expected a non-empty list of numbers")
    for i, v in enumerate(obj):
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise EncodingError("expected a finite number", f"/{i}")
    return np.array(obj, dtype=float)


def _format(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(None)
        return format(x, ".17g")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_format(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # Leaf lists (numbers only) stay on one line.
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in seq):
            return "[" + ", ".join(_format(v, 0, 0) for v in seq) + "]"
        return "[" + pad + sep.join(_format(v, indent, level + 1) for v in seq) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to JSON with 17-significant-digit floats."""
    return _format(obj, indent, 0)
