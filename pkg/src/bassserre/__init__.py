"""Computation with finite graphs of finite groups and their fundamental groups."""

from .fileformat import dumps, load, loads
from .graph_of_groups import GraphOfGroups, euler_characteristic, is_reduced, validate
from .words import NormalForm, PathGroup, PathWord

__all__ = [
    "GraphOfGroups", "NormalForm", "PathGroup", "PathWord", "dumps",
    "euler_characteristic", "is_reduced", "load", "loads", "validate",
]
