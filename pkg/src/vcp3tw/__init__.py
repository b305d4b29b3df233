"""Exact VCP3 and randomized connected-VCP3 solvers on bounded-treewidth graphs."""

from .convolution import INF, convolve_fast, convolve_naive
from .cutcount import count_parity_tables, decide_constrained_cvcp3, minimize_cvcp3
from .decomposition import (NiceDecomposition, TreeDecomposition, heuristic_decompose,
                            make_nice, parse_td, validate, validate_nice)
from .graph import Graph, is_connected_induced, is_vcp3_set, parse_graph
from .vcp3 import solve_vcp3

__all__ = [
    "INF", "Graph", "NiceDecomposition", "TreeDecomposition", "convolve_fast",
    "convolve_naive", "count_parity_tables", "decide_constrained_cvcp3",
    "heuristic_decompose", "is_connected_induced", "is_vcp3_set", "make_nice",
    "minimize_cvcp3", "parse_graph", "parse_td", "solve_vcp3", "validate",
    "validate_nice",
]
