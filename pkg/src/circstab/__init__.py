"""Stability of circulant graphs under the canonical bipartite double cover."""

from .circulant import CirculantGraph, ConnectionSet
from .conditions import PermPair, StabilityReport, stability_verdict

__all__ = ["CirculantGraph", "ConnectionSet", "PermPair", "StabilityReport", "stability_verdict"]
__version__ = "0.1.0"
