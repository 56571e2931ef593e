"""CSV/JSON serialization of report rows.

Every command has a fixed column schema. CSV floats are written with 17
significant digits and JSON floats with Python's shortest round-trip repr,
so both formats re-parse to identical values.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping

from .engine import RateBreakdown

__all__ = ["SCHEMAS", "serialize", "parse", "breakdown_row"]

_RATE = [
    ("rate", float), ("N", float), ("n", float), ("m", float),
    ("entropy_term", float), ("delta", float), ("leak", float), ("pa_term", float),
    ("Q", float), ("q_eff", float), ("xi", float), ("q_key", float),
    ("eps_total", float), ("eps_ec", float), ("eps_pe", float), ("eps_pa", float),
    ("eps_bar", float), ("bound", str), ("protocol", str), ("dimension", int),
    ("pe_scheme", str), ("clamped", bool), ("yield_model", str), ("leak_at", str),
]

SCHEMAS: dict[str, list[tuple[str, type]]] = {
    "rate": _RATE,
    "threshold": [
        ("protocol", str), ("dimension", int), ("bound", str), ("pe_scheme", str),
        ("Q", float), ("N0", float), ("N0_scaled", float),
    ],
    "sweep": [
        ("protocol", str), ("dimension", int), ("bound", str), ("pe_scheme", str),
        ("Q", float), ("N", float), ("N_scaled", float), ("rate", float),
        ("rate_scaled", float), ("rate_clamped", float),
    ],
    "compare-pe": [
        ("protocol", str), ("Q", float), ("N", float), ("rate_ipovm", float),
        ("rate_cpovm", float), ("improvement_pct", float),
    ],
    "verify": [
        ("check", str), ("max_residual", float), ("tolerance", float), ("passed", bool),
    ],
}


def breakdown_row(b: RateBreakdown) -> dict:
    d = b.to_dict()
    return {name: d[name] for name, _ in _RATE}


def _fmt(value, typ):
    if typ is float:
        return format(float(value), ".17g")
    if typ is bool:
        return "true" if value else "false"
    return str(value)


def _coerce(text, typ):
    if typ is bool:
        if text not in ("true", "false"):
            raise ValueError(f"not a boolean: {text!r}")
        return text == "true"
    return typ(text)


def serialize(rows: Iterable[Mapping], command: str, fmt: str = "csv") -> bytes:
    """Encode rows of ``command`` as CSV or JSON bytes."""
    schema = SCHEMAS[command]
    names = [n for n, _ in schema]
    rows = [{n: r[n] for n in names} for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for r in rows:
            w.writerow([_fmt(r[n], t) for n, t in schema])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        typed = [{n: t(r[n]) for n, t in schema} for r in rows]
        doc = {"command": command, "columns": names, "rows": typed}
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def parse(data: bytes, command: str, fmt: str = "csv") -> list[dict]:
    """Inverse of :func:`serialize`."""
    schema = SCHEMAS[command]
    names = [n for n, _ in schema]
    text = data.decode("utf-8")
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != names:
            raise ValueError(f"unexpected header {header}")
        return [{n: _coerce(v, t) for (n, t), v in zip(schema, row)} for row in reader]
    if fmt == "json":
        doc = json.loads(text)
        if doc["columns"] != names:
            raise ValueError(f"unexpected columns {doc['columns']}")
        return [{n: t(r[n]) for n, t in schema} for r in doc["rows"]]
    raise ValueError(f"unknown format {fmt!r}")
