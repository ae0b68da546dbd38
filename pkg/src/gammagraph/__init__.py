"""Toolkit for group-labelled graphs: nonzero cycles, walls, models, linkages and cycle-chains."""
from .errors import (CapExceeded, ChainError, GammaGraphError, GraphError, GroupError, LinkageError,
                     ModelError, WallError)
from .graph import CycleSpec, Edge, LabelledGraph, PathSpec, weight
from .groups import GroupElem, GroupSpec, make_group

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "ChainError", "CycleSpec", "Edge", "GammaGraphError", "GraphError", "GroupElem",
    "GroupError", "GroupSpec", "LabelledGraph", "LinkageError", "ModelError", "PathSpec", "WallError",
    "make_group", "weight",
]
