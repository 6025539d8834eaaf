"""Deterministic JSON and CSV emission.

Floats are written with 17 significant digits so they round-trip exactly;
NaN and infinities become JSON null (CSV ``nan``/``inf``).  Dictionaries keep
insertion order, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import fields, is_dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DomainError
from .model import SampledField

__all__ = ["format_float", "to_plain", "dumps", "write_csv", "wavefunction_rows", "read_wavefunction_csv", "WAVEFUNCTION_COLUMNS"]

WAVEFUNCTION_COLUMNS = ("q", "X", "P", "Q", "S")


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def to_plain(obj: Any) -> Any:
    """Convert dataclasses, enums and numpy scalars/arrays to JSON-ready values."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _emit(obj: Any, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            parts: list[str] = []
            for v in obj:
                _emit(v, indent, level + 1, parts)
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    out: list[str] = []
    _emit(to_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def write_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else to_plain(v) for v in row])
    return buf.getvalue()


def wavefunction_rows(q, x, p, qpot, s):
    return zip(*(np.asarray(c, dtype=float) for c in (q, x, p, qpot, s)))


def read_wavefunction_csv(text: str) -> tuple[SampledField, dict[str, np.ndarray]]:
    """Parse a wavefunction CSV back into the amplitude field and all columns."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != WAVEFUNCTION_COLUMNS:
        raise DomainError(f"expected columns {','.join(WAVEFUNCTION_COLUMNS)}, got {header}")
    data = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    cols = {name: data[:, i] for i, name in enumerate(WAVEFUNCTION_COLUMNS)}
    return SampledField(cols["q"], cols["X"]), cols
