"""Deterministic CSV/JSON writers for scenario tables."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Sequence

import numpy as np

FLOAT_FMT = "{:.12g}"


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return FLOAT_FMT.format(float(x))


def clean(obj: Any) -> Any:
    """Convert numpy scalars/arrays to JSON-friendly values rounded to 12 digits."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return None
        return float(FLOAT_FMT.format(x))
    if isinstance(obj, complex):
        return {"re": clean(obj.real), "im": clean(obj.imag)}
    return obj


class Table:
    """Column-major numeric table with a fixed header."""

    def __init__(self, header: Sequence[str], columns: Sequence[Sequence[float]]):
        if len(header) != len(columns):
            raise ValueError("header and column count differ")
        lengths = {len(c) for c in columns}
        if len(lengths) > 1:
            raise ValueError("columns have different lengths")
        self.header = list(header)
        self.columns = [np.asarray(c) for c in columns]

    def __len__(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    def rows(self):
        for i in range(len(self)):
            yield [fmt(c[i]) for c in self.columns]

    def write(self, path: Path, fmt_name: str) -> Path:
        if fmt_name == "csv":
            path = path.parent / f"{path.name}.csv"
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(self.header)
                w.writerows(self.rows())
        elif fmt_name == "json":
            path = path.parent / f"{path.name}.json"
            payload = {
                "columns": self.header,
                "rows": [[float(v) for v in row] for row in self.rows()],
            }
            write_json(path, payload)
        else:
            raise ValueError(f"unknown output format {fmt_name!r}")
        return path


def write_json(path: Path, payload: Any) -> Path:
    with open(path, "w", newline="\n") as fh:
        json.dump(clean(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
