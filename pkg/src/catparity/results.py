"""Tabular sweep results with reproducibility metadata."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class SweepResult:
    """Named columns, numeric rows, and the metadata needed to reproduce them."""

    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} does not match column count {len(self.columns)}"
                )

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows], dtype=float)

    def to_csv(self, path: str | Path) -> Path:
        """Write rows as CSV plus a JSON metadata sidecar next to it."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_format_cell(v) for v in row])
        self._write_sidecar(path)
        return path

    def to_json(self, path: str | Path) -> Path:
        path = Path(path)
        payload = {
            "columns": self.columns,
            "rows": [[_jsonable(v) for v in row] for row in self.rows],
            "metadata": _jsonable(self.metadata),
        }
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        self._write_sidecar(path)
        return path

    def _write_sidecar(self, path: Path) -> Path:
        side = path.with_suffix(path.suffix + ".meta.json")
        side.write_text(json.dumps(_jsonable(self.metadata), indent=2, sort_keys=True) + "\n")
        return side


def _format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    return v
