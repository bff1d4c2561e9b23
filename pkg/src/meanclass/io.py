"""CSV (``t,re,im``), JSON and plot-data serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError
from .signals import Grid, Tabulated

HEADER = ["t", "re", "im"]


def format_csv(t: np.ndarray, values: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for ti, v in zip(np.asarray(t, dtype=float), np.asarray(values, dtype=complex)):
        w.writerow([repr(float(ti)), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def write_csv(path, t, values) -> None:
    Path(path).write_text(format_csv(t, values), encoding="utf-8")


def parse_csv(text: str) -> Tabulated:
    """Parse ``t,re,im`` rows on a uniform grid into a :class:`Tabulated` signal."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != HEADER:
        raise ParseError("header must be exactly 't,re,im'", 1)
    ts, vals = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", lineno)
        try:
            t, re_, im = (float(c) for c in row)
        except ValueError:
            raise ParseError(f"non-numeric field in {','.join(row)!r}", lineno) from None
        if not all(math.isfinite(x) for x in (t, re_, im)):
            raise ParseError("non-finite value", lineno)
        if len(ts) >= 2:
            dt = ts[1] - ts[0]
            if abs((t - ts[-1]) - dt) > 1e-9 * max(1.0, abs(t)):
                raise ParseError("sample times are not on a uniform grid", lineno)
        elif len(ts) == 1 and not t > ts[0]:
            raise ParseError("sample times must increase", lineno)
        ts.append(t)
        vals.append(complex(re_, im))
    if not ts:
        raise ParseError("no data rows", 2)
    dt = ts[1] - ts[0] if len(ts) > 1 else 1.0
    return Tabulated(Grid(ts[0], dt, len(ts)), vals)


def read_csv(path) -> Tabulated:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def _default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default, allow_nan=True) + "\n"


def plotdata(columns) -> str:
    """Whitespace-separated columns, one row per line."""
    return "".join(" ".join(f"{x:.12g}" for x in row) + "\n" for row in zip(*columns))
