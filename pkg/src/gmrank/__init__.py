"""PageRank, CheiRank and 2DRank on large directed graphs, and the network of cultures."""

from .graph import DirectedGraph, ParseError, degrees, parse_edge_list, parse_labels, reverse
from .gmatrix import (ContractError, ConvergenceError, DenseGoogleOperator, GoogleOperator,
                      RankVector, cheirank, pagerank, power_iterate)
from .ranking import DensityGrid, RankIndex, correlator, density_grid, rank_index, two_d_rank
from .fit import InsufficientDataError, PowerLawFit, fit_power_law

__all__ = [
    "DirectedGraph", "ParseError", "degrees", "parse_edge_list", "parse_labels", "reverse",
    "ContractError", "ConvergenceError", "DenseGoogleOperator", "GoogleOperator",
    "RankVector", "cheirank", "pagerank", "power_iterate",
    "DensityGrid", "RankIndex", "correlator", "density_grid", "rank_index", "two_d_rank",
    "InsufficientDataError", "PowerLawFit", "fit_power_law",
]
