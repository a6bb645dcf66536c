"""Static figure rendering for simulation record CSVs."""

from .render import FIGURE_IDS, FigureError, render

__version__ = "0.1.0"
