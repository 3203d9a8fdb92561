"""Figure rendering for lassopred CLI outputs (CSV/JSON in, vector images out)."""

__version__ = "0.1.0"

from .render import FigureJob, render

__all__ = ["FigureJob", "render"]
