"""Exact partition functions, Lee-Yang zero certificates and recovery pipelines."""

from .graphs import DirectedWeightedGraph, MultiGraph
from .polynomial import UniPoly

__all__ = ["DirectedWeightedGraph", "MultiGraph", "UniPoly"]
__version__ = "0.1.0"
