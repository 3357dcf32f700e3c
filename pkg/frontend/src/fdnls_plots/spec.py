"""Plot specification: what to read, how to draw it, where to write it."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

FIGURE_KINDS = ("region", "curve", "heatmap", "trace")


class SchemaError(ValueError):
    """Input CSV does not carry the columns the figure kind needs."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    figure_kind: str
    output: str
    x: str
    y: str
    value: Optional[str] = None  # heatmap color column
    extra_y: tuple = ()  # additional curves sharing the x axis
    xlabel: Optional[str] = None
    ylabel: Optional[str] = None
    title: Optional[str] = None
    logx: bool = False
    logy: bool = False

    def __post_init__(self):
        if self.figure_kind not in FIGURE_KINDS:
            raise SchemaError(
                f"unknown figure kind {self.figure_kind!r}; valid: {', '.join(FIGURE_KINDS)}"
            )
        if self.figure_kind == "heatmap" and not self.value:
            raise SchemaError("heatmap requires a 'value' column")


def load_spec(path) -> PlotSpec:
    """Read a JSON plot spec and validate its fields."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed spec file: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("spec file must contain a JSON object")
    required = ("input_csv", "figure_kind", "output", "x", "y")
    missing = [key for key in required if key not in data]
    if missing:
        raise SchemaError(f"spec is missing required keys: {', '.join(missing)}")
    known = {
        "input_csv", "figure_kind", "output", "x", "y", "value", "extra_y",
        "xlabel", "ylabel", "title", "logx", "logy",
    }
    unknown = set(data) - known
    if unknown:
        raise SchemaError(f"unknown spec keys: {', '.join(sorted(unknown))}")
    if "extra_y" in data:
        data["extra_y"] = tuple(data["extra_y"])
    return PlotSpec(**data)


def read_table(spec: PlotSpec) -> dict:
    """Load the CSV columns the spec references, in file order.

    Fails loudly when the file or any referenced column is absent; never
    reorders or resamples rows.
    """
    path = Path(spec.input_csv)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = list(reader)
    wanted = [spec.x, spec.y, *spec.extra_y]
    if spec.value:
        wanted.append(spec.value)
    missing = [c for c in wanted if c not in header]
    if missing:
        raise SchemaError(
            f"{path}: missing columns {missing}; file has {header}"
        )
    idx = {c: header.index(c) for c in wanted}
    cols = {c: [] for c in wanted}
    for ln, row in enumerate(rows, start=2):
        for c, i in idx.items():
            try:
                cols[c].append(float(row[i]))
            except (IndexError, ValueError) as exc:
                raise SchemaError(f"{path}: line {ln}, column {c!r}: {exc}") from exc
    return cols
