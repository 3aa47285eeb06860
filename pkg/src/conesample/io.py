"""Plain-text output formats.

Tables are whitespace-separated columns preceded by ``# key: value``
metadata lines; blocks for different curves are separated by a blank
line.  Records are JSON lines, the first one holding the metadata.
Numbers are written with 17 significant digits so reading them back
reproduces the exact doubles.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Sequence, TextIO, Tuple

import numpy as np

__all__ = ["fmt", "write_meta", "write_table", "read_table", "write_records", "read_records"]


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_meta(out: TextIO, meta: Dict[str, object]) -> None:
    for k, v in meta.items():
        out.write(f"# {k}: {v}\n")


def write_table(out: TextIO, rows: Iterable[Sequence], columns: Sequence[str] = (), meta=None) -> None:
    if meta:
        write_meta(out, meta)
    if columns:
        out.write(" ".join(columns) + "\n")
    for row in rows:
        out.write(" ".join(fmt(v) for v in row) + "\n")


def read_table(path) -> Tuple[Dict[str, str], List[str], List[np.ndarray]]:
    """Parse a table file into ``(meta, column_names, blocks)``.

    Each block is a 2-D float array; blocks are split on blank lines.
    """
    meta: Dict[str, str] = {}
    columns: List[str] = []
    blocks: List[List[List[float]]] = [[]]
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition(":")
                meta.setdefault(key.strip(), val.strip())
                continue
            if not line.strip():
                if blocks[-1]:
                    blocks.append([])
                continue
            parts = line.split()
            try:
                blocks[-1].append([float(p) for p in parts])
            except ValueError:
                columns = parts
    return meta, columns, [np.array(b) for b in blocks if b]


def write_records(out: TextIO, directions, meta) -> None:
    out.write(json.dumps({"meta": meta}) + "\n")
    for row in np.atleast_2d(directions):
        out.write('{"x": [' + ", ".join(fmt(v) for v in row) + "]}\n")


def read_records(path) -> Tuple[dict, np.ndarray]:
    meta: dict = {}
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            if "meta" in rec:
                meta = rec["meta"]
            else:
                rows.append(rec["x"])
    return meta, np.array(rows, dtype=float)
