"""Rendering of fdnls CSV artifacts into publication-style figures.

No numerical logic lives here: the package reads delimited artifacts emitted
by the simulation CLI and renders them deterministically under a committed
style file.  Data are never reordered or resampled.
"""

__version__ = "1.0.0"

from .spec import FIGURE_KINDS, PlotSpec, SchemaError, load_spec
from .render import render

__all__ = ["PlotSpec", "SchemaError", "FIGURE_KINDS", "load_spec", "render"]
