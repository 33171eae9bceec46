"""Curve records and their CSV form (12 significant digits, LF, UTF-8)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

PRECISION = 12


@dataclass
class Curve:
    """An x grid plus named y columns of the same length."""

    x_name: str
    x: np.ndarray
    columns: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)

    def add(self, name, values):
        values = np.asarray(values, dtype=float)
        if values.shape != self.x.shape:
            raise ValueError(f"column {name!r} has {values.size} values for {self.x.size} grid points")
        if name in self.columns or name == self.x_name:
            raise ValueError(f"duplicate column {name!r}")
        self.columns[name] = values


def fmt(value):
    """Fixed 12-significant-digit rendering; ``inf``/``nan`` spelled out."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{PRECISION}g}"
    return "0" if text == "-0" else text


def to_csv(curve):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([curve.x_name, *curve.columns])
    for i, x in enumerate(curve.x):
        writer.writerow([fmt(x), *(fmt(col[i]) for col in curve.columns.values())])
    return buf.getvalue()


def write_text(path, text):
    """Write UTF-8 (no BOM) with LF newlines regardless of platform."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: need a header and at least one data row")
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in row] for row in body])
    curve = Curve(header[0], data[:, 0])
    for j, name in enumerate(header[1:], start=1):
        curve.add(name, data[:, j])
    return curve
