"""Delimited and JSON output with stable, reproducible formatting.

All floats are written with 17 significant digits and newline-terminated
Unix line endings, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    """Decimal text with 17 significant digits."""
    return f"{x:.17g}"


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def write_json(path: Path, payload: dict) -> Path:
    return write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_point_csv(path: Path, points: np.ndarray) -> Path:
    lines = ["re,im"]
    for z in np.asarray(points, dtype=complex).ravel():
        lines.append(f"{fmt(z.real)},{fmt(z.imag)}")
    return write_text(path, "\n".join(lines) + "\n")


def read_point_csv(path: Path) -> np.ndarray:
    rows = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not rows or rows[0].strip().lower() != "re,im":
        raise ValueError(f"{path}: expected a point table with header 're,im'")
    out = []
    for line in rows[1:]:
        re_s, im_s = line.split(",")
        out.append(complex(float(re_s), float(im_s)))
    return np.asarray(out, dtype=complex)


def write_rows_csv(path: Path, header: str, rows: list[list]) -> Path:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v)
                              for v in row))
    return write_text(path, "\n".join(lines) + "\n")
