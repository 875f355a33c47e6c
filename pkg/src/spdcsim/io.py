"""Deterministic CSV/JSON writers.  Floats are always written with 17 significant digits."""

from __future__ import annotations

import json
import math
import platform
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _to_json(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt(x) if math.isfinite(x) else json.dumps(fmt(x))
    if isinstance(obj, complex):
        return _to_json({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_to_json(v, indent, level + 1) for v in obj) + "]"
        items = ",\n".join(pad + _to_json(v, indent, level + 1) for v in obj)
        return "[\n" + items + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(f"{pad}{json.dumps(str(k))}: {_to_json(v, indent, level + 1)}" for k, v in obj.items())
        return "{\n" + items + "\n" + end + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with fixed float formatting; non-finite floats become strings."""
    return _to_json(obj, indent, 0) + "\n"


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj))
    return path


def write_table(path: Path, columns: dict) -> Path:
    """Columns of equal length as a headed CSV."""
    names = list(columns)
    cols = [np.asarray(columns[k]).ravel() for k in names]
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("all columns must have the same length")
    lines = [",".join(names)]
    lines += [",".join(fmt(c[i]) for c in cols) for i in range(n)]
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)


def write_matrix(path: Path, rows: np.ndarray, cols: np.ndarray, values: np.ndarray, corner: str = "row\\col") -> Path:
    """Matrix layout: first line holds the column axis, first column the row axis."""
    values = np.asarray(values)
    if values.shape != (len(rows), len(cols)):
        raise ValueError("matrix shape does not match its axes")
    out = [corner + "," + ",".join(fmt(c) for c in cols)]
    for r, line in zip(rows, values):
        out.append(fmt(r) + "," + ",".join(fmt(v) for v in line))
    Path(path).write_text("\n".join(out) + "\n")
    return Path(path)


def read_matrix(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", skip_header=0)
    return data[1:, 0], data[0, 1:], data[1:, 1:]


def versions() -> dict:
    import scipy

    from . import __version__

    return {"spdcsim": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}
