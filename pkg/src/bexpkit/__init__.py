"""Sparse-graph decompositions and first-order model checking.

Orderings, colorings, and forests whose quality is certified by measured
bounds rather than trusted promises, plus a quantifier-elimination model
checker built on top of them.
"""

from . import degeneracy, domset, graphs, hardness, logic, treedepth, wcol
from .graphs import (BlockOrdering, ClassParams, Graph, GraphFormatError,
                     OracleOverflow, PromiseViolation, RoundLedger,
                     VertexOrdering, parse_graph, serialize_graph)

__all__ = [
    "BlockOrdering", "ClassParams", "Graph", "GraphFormatError",
    "OracleOverflow", "PromiseViolation", "RoundLedger", "VertexOrdering",
    "parse_graph", "serialize_graph",
    "degeneracy", "domset", "graphs", "hardness", "logic", "treedepth",
    "wcol",
]
