"""Table and report emission.

All emitted floats are rendered with 12 significant digits, identically in
CSV cells and JSON documents, so reruns with identical inputs and seeds
are byte-identical and every table re-parses with `read_csv`.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence


def format_float(x: float) -> str:
    """Render a float with 12 significant digits."""
    return f"{x:.12g}"


def _render_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a table with a fixed column order and formatted floats."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_render_cell(v) for v in row])


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Read back a table written by `write_csv` (header, string rows)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty table")
        rows = [row for row in reader if row]
    return header, rows


def round_floats(obj: Any) -> Any:
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(format_float(obj))
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def write_json(path: str | Path, obj: Any) -> None:
    """Write a JSON report with sorted keys and rounded floats."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(round_floats(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
