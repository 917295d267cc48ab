"""The results-file contract: one fixed 16-column header.

The header is matched exactly, order included.  A permuted or renamed
header means the file was not written by the runner this package
understands, and silently reading it positionally would plot garbage, so
that is a hard error, not a warning.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

COLUMNS = [
    "graph", "d", "p1", "p2", "quantity", "k1", "k2", "r", "rho",
    "estimate_low", "estimate_high", "stderr", "trials", "censored",
    "seed", "config_hash",
]

_INT_FIELDS = {"d", "k1", "k2", "r", "trials", "censored", "seed"}
_FLOAT_FIELDS = {"p1", "p2", "rho", "estimate_low", "estimate_high", "stderr"}


class SchemaError(ValueError):
    """The file does not follow the results schema."""


@dataclass
class ResultRow:
    graph: str
    d: int
    p1: float | None
    p2: float | None
    quantity: str
    k1: int | None
    k2: int | None
    r: int | None
    rho: float | None
    estimate_low: float | None
    estimate_high: float | None
    stderr: float | None
    trials: int | None
    censored: int | None
    seed: int | None
    config_hash: str


def _convert(name: str, raw: str, lineno: int):
    if raw == "":
        return None
    try:
        if name in _INT_FIELDS:
            return int(raw)
        if name in _FLOAT_FIELDS:
            return float(raw)
    except ValueError:
        raise SchemaError(f"line {lineno}: field {name!r} is not numeric: {raw!r}")
    return raw


def read_rows(path: str) -> list[ResultRow]:
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror}")
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected the results header")
        if header != COLUMNS:
            raise SchemaError(
                f"{path}: header does not match the results schema\n"
                f"  expected: {','.join(COLUMNS)}\n"
                f"  found:    {','.join(header)}")
        rows = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(COLUMNS):
                raise SchemaError(
                    f"{path}: line {lineno}: {len(rec)} fields, "
                    f"expected {len(COLUMNS)}")
            values = {n: _convert(n, raw, lineno) for n, raw in zip(COLUMNS, rec)}
            if values["graph"] is None or values["quantity"] is None:
                raise SchemaError(f"{path}: line {lineno}: graph and quantity "
                                  f"are required")
            rows.append(ResultRow(**values))
    return rows


def select(rows: list[ResultRow], quantity: str) -> list[ResultRow]:
    return [r for r in rows if r.quantity == quantity]
