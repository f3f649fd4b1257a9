"""Convex-hull distances, inclusion margins and interior-class audits."""

from readout_lab.geometry.audit import flag_interior, interior_cutoff
from readout_lab.geometry.hull import eps_inclusion_margin, hull_distance, mean_pairwise_distance
from readout_lab.geometry.simplex import simplex_project
from readout_lab.geometry.types import HullSolution

__all__ = [
    "HullSolution",
    "eps_inclusion_margin",
    "flag_interior",
    "hull_distance",
    "interior_cutoff",
    "mean_pairwise_distance",
    "simplex_project",
]
