"""Result rows and files.

One flat CSV schema serves every subcommand, with the fixed column order
below; fields that do not apply to a quantity stay empty.  For curve rows
the p1/p2 columns hold the estimated critical point itself (the bracketed
p1 estimate also lands in estimate_low/high); for every other quantity they
hold the densities the experiment ran at.  Files are written to a temporary
name in the target directory and atomically renamed, and float formatting
uses repr, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import dataclass

COLUMNS = [
    "graph", "d", "p1", "p2", "quantity", "k1", "k2", "r", "rho",
    "estimate_low", "estimate_high", "stderr", "trials", "censored",
    "seed", "config_hash",
]


@dataclass
class Row:
    graph: str
    d: int
    quantity: str
    p1: float | None = None
    p2: float | None = None
    k1: int | None = None
    k2: int | None = None
    r: int | None = None
    rho: float | None = None
    estimate_low: float | None = None
    estimate_high: float | None = None
    stderr: float | None = None
    trials: int | None = None
    censored: int | None = None
    seed: int | None = None
    config_hash: str = ""

    def as_list(self) -> list[str]:
        return [_fmt(getattr(self, c)) for c in COLUMNS]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file and a crashed run leaves no truncated output."""
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_rows(path: str, rows: list[Row]) -> None:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.as_list())
    atomic_write_text(path, buf.getvalue())


def write_sidecar(path: str, command: str, cfg_hash: str, resolved: dict,
                  n_rows: int, started: float) -> None:
    from . import __version__

    meta = {
        "version": __version__,
        "command": command,
        "config_hash": cfg_hash,
        "rows": n_rows,
        "started_unix": round(started, 3),
        "elapsed_s": round(time.time() - started, 3),
        "config": resolved,
    }
    atomic_write_text(path, json.dumps(meta, indent=2, sort_keys=True,
                                       default=str) + "\n")
