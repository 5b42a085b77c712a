"""Presentations of the integral cohomology rings of tree braid groups."""
from ._accel import backend_name
from .tree import PlanarTree, parse_tree, subdivide_for

__all__ = ["PlanarTree", "parse_tree", "subdivide_for", "backend_name"]
__version__ = "0.1.0"
