"""Render figures from the simulator's results CSVs.

This package only reads the documented CSV columns; it never recomputes
simulation quantities.
"""

from .figures import FIGURE_IDS, FigureError, render

__all__ = ["FIGURE_IDS", "FigureError", "render"]
