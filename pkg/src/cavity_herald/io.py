"""Canonical table output: CSV with a JSON metadata line, or an equivalent JSON document."""

from __future__ import annotations

import csv
import io as _io
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

SIGNIFICANT_DIGITS = 12
FORMATS = ("csv", "json")


def format_number(x) -> str:
    """Shortest round-trip text of ``x`` after rounding to 12 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(round_significant(x))
    if x is None:
        return ""
    return str(x)


def round_significant(x: float) -> float:
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def _json_value(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return round_significant(x) if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if hasattr(x, "item"):
        return _json_value(x.item())
    return str(x)


def _plain(x):
    # numpy scalars behave like builtins for formatting
    return x.item() if hasattr(x, "item") and not isinstance(x, (str, bytes)) else x


def dumps_meta(meta: dict) -> str:
    return json.dumps(_json_value(meta), sort_keys=True, separators=(",", ":"))


def render_table(columns, rows, meta: dict | None = None, fmt: str = "csv") -> str:
    """Serialize ``rows`` (sequences or dicts keyed by ``columns``) to text."""
    columns = list(columns)
    rows = [[_plain(r[c]) for c in columns] if isinstance(r, dict) else [_plain(v) for v in r]
            for r in rows]
    if fmt == "json":
        doc = {"meta": meta or {}, "columns": columns,
               "rows": [dict(zip(columns, r)) for r in rows]}
        return json.dumps(_json_value(doc), sort_keys=False, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = _io.StringIO()
    buf.write("# " + dumps_meta(meta or {}) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([format_number(v) for v in r])
    return buf.getvalue()


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_table(text: str):
    """Inverse of :func:`render_table` for CSV: returns ``(meta, columns, rows)``."""
    lines = text.splitlines()
    meta = {}
    if lines and lines[0].startswith("# "):
        meta = json.loads(lines[0][2:])
        lines = lines[1:]
    reader = csv.reader(lines)
    columns = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return meta, columns, rows


@contextmanager
def open_output(path):
    """Yield a text stream for ``path``; ``None`` or ``"-"`` means standard output."""
    if path in (None, "-"):
        yield sys.stdout
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="") as fh:
        yield fh


def write_table(path, columns, rows, meta: dict | None = None, fmt: str = "csv") -> None:
    with open_output(path) as fh:
        fh.write(render_table(columns, rows, meta, fmt))
