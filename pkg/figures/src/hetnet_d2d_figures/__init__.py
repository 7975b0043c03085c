"""Batch figure rendering for hetnet-d2d experiment outputs."""

from .render import FIGURE_IDS, FigureSpec, cdf_layer, render

__version__ = "0.1.0"
