"""Figure renderers: one per figure kind, all style-file driven."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spec import PlotSpec, SchemaError, read_table

_STYLE = Path(__file__).with_name("fdnls.mplstyle")

# deterministic output: strip volatile PDF metadata
_PDF_METADATA = {"CreationDate": None, "Producer": None, "Creator": None}


def _grid_from_long(x, y, v):
    """Pivot long-form (x, y, value) rows into a dense grid.

    Row order is preserved within each axis; duplicate coordinates are
    rejected rather than silently averaged.
    """
    xs = list(dict.fromkeys(x))  # unique, file order
    ys = list(dict.fromkeys(y))
    xi = {val: i for i, val in enumerate(xs)}
    yi = {val: i for i, val in enumerate(ys)}
    grid = np.full((len(ys), len(xs)), np.nan)
    for a, b, c in zip(x, y, v):
        i, j = yi[b], xi[a]
        if not np.isnan(grid[i, j]):
            raise SchemaError(f"duplicate grid point (x={a}, y={b})")
        grid[i, j] = c
    if np.any(np.isnan(grid)):
        raise SchemaError("heatmap input is not a complete rectangular grid")
    return np.asarray(xs), np.asarray(ys), grid


def render(spec: PlotSpec) -> list:
    """Render one figure; writes vector (.pdf) and raster (.png) siblings.

    Returns the list of written paths.
    """
    cols = read_table(spec)
    x = np.asarray(cols[spec.x])
    with plt.style.context(str(_STYLE)):
        fig, ax = plt.subplots()
        if spec.figure_kind in ("curve", "trace"):
            marker = "." if spec.figure_kind == "trace" else None
            ax.plot(x, cols[spec.y], marker=marker, label=spec.y)
            for name in spec.extra_y:
                ax.plot(x, cols[name], marker=marker, label=name)
            if spec.extra_y:
                ax.legend()
        elif spec.figure_kind == "region":
            # scatter colored by the second column's sign: the instability region
            y = np.asarray(cols[spec.y])
            ax.plot(x, y, lw=1.6)
            ax.fill_between(x, y, y.max(), alpha=0.25)
        else:  # heatmap
            xs, ys, grid = _grid_from_long(x, cols[spec.y], cols[spec.value])
            mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
            fig.colorbar(mesh, ax=ax, label=spec.value)
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_xlabel(spec.xlabel or spec.x)
        ax.set_ylabel(spec.ylabel or spec.y)
        if spec.title:
            ax.set_title(spec.title)

        out = Path(spec.output)
        stem = out.with_suffix("")
        written = []
        for ext in (".pdf", ".png"):
            target = stem.with_suffix(ext)
            if ext == ".pdf":
                fig.savefig(target, metadata=_PDF_METADATA)
            else:
                fig.savefig(target)
            written.append(target)
        plt.close(fig)
    return written
