"""Longest cycles in sparse random graphs via 2-core stripping and tree packings."""

from .analytic import core_fractions, corollary1, k1_of, rho_tree, solve_lambda, solve_x
from .estimator import EstimateRecord, estimate_batch, estimate_once
from .graph import Graph, bfs_ball, giant_component, two_core_of_giant
from .packing import assemble_gamma_star, phi_tree
from .samplers import Seed, sample_gnm_min2, sample_gnp
from .strip import classify, strip

__version__ = "0.1.0"

__all__ = [
    "EstimateRecord", "Graph", "Seed", "assemble_gamma_star", "bfs_ball", "classify",
    "core_fractions", "corollary1", "estimate_batch", "estimate_once", "giant_component",
    "k1_of", "phi_tree", "rho_tree", "sample_gnm_min2", "sample_gnp", "solve_lambda",
    "solve_x", "strip", "two_core_of_giant",
]
