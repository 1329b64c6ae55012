"""JSON input documents and deterministic report serialization.

Quaternions are 4-arrays ``[w, x, y, z]``; vectors are arrays of those and
matrices are row-major arrays of arrays of those. Report floats are written
with 17 significant digits so identical runs give byte-identical output.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .qoperator import QMatrix
from .quaternion import Quaternion, SliceFrame

INPUT_KEYS = {"matrix", "frame", "symbol", "t_grid"}
FRAME_KEYS = {"m", "n"}
SYMBOL_KEYS = {"family", "custom_prefix", "sizes", "growth"}


class InputError(ValueError):
    """Malformed input document."""


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2) -> str:
    """``json.dumps`` with fixed 17-significant-digit floats."""
    return _encode(obj, 0, indent) + "\n"


def _encode(obj, level: int, indent: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Quaternion):
        obj = obj.to_list()
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, level + 1, indent)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_encode(v, level + 1, indent) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, level + 1, indent) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_quaternion(value) -> Quaternion:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"quaternion must be a 4-array of numbers, got {value!r}") from exc
    if arr.shape != (4,):
        raise InputError(f"quaternion must be a 4-array of numbers, got {value!r}")
    return Quaternion.from_array(arr)


def parse_matrix(rows) -> QMatrix:
    if not isinstance(rows, list) or not rows:
        raise InputError("matrix must be a non-empty array of rows")
    n = len(rows)
    data = np.zeros((n, n, 4))
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"matrix must be square: row {r} has {len(row) if isinstance(row, list) else '?'} entries, expected {n}")
        for c, entry in enumerate(row):
            data[r, c] = parse_quaternion(entry).as_array()
    return QMatrix(data)


def parse_frame(doc, m_override=None, n_override=None) -> SliceFrame:
    doc = doc or {}
    if not isinstance(doc, dict):
        raise InputError("frame must be an object")
    unknown = set(doc) - FRAME_KEYS
    if unknown:
        raise InputError(f"unknown frame fields: {sorted(unknown)}")
    m = m_override if m_override is not None else doc.get("m")
    n = n_override if n_override is not None else doc.get("n")
    try:
        return SliceFrame(
            None if m is None else parse_quaternion(m),
            None if n is None else parse_quaternion(n),
        )
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"invalid frame: {exc}") from exc


def parse_symbol(doc, m) -> tuple:
    """Returns ``(DiagonalSymbol, sizes or None)``."""
    from .unbounded import DiagonalSymbol

    if not isinstance(doc, dict):
        raise InputError("symbol must be an object")
    unknown = set(doc) - SYMBOL_KEYS
    if unknown:
        raise InputError(f"unknown symbol fields: {sorted(unknown)}")
    family = doc.get("family", "k_times_m")
    try:
        if family == "custom":
            prefix = [parse_quaternion(q) for q in doc.get("custom_prefix", [])]
            sym = DiagonalSymbol.custom(prefix, doc.get("growth", "linear"), m=m)
        elif family in ("k_times_m", "k_plus_km"):
            sym = DiagonalSymbol(family, m)
        else:
            raise InputError(f"unknown symbol family {family!r}")
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sizes = doc.get("sizes")
    if sizes is not None:
        if not isinstance(sizes, list) or not all(isinstance(s, int) for s in sizes):
            raise InputError("symbol sizes must be an array of integers")
    return sym, sizes


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    unknown = set(doc) - INPUT_KEYS
    if unknown:
        raise InputError(f"unknown input fields: {sorted(unknown)}")
    return doc


def matrix_to_list(A: QMatrix) -> list:
    return A.data.tolist()
