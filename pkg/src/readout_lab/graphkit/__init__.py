"""Synthetic graphs, normalization, feature alignment and hop stacks."""

from readout_lab.graphkit.generate import generate_graph_collection, generate_sbm, make_graph
from readout_lab.graphkit.io import read_edge_list, write_edge_list
from readout_lab.graphkit.preprocess import adjacency, align_features, hop_stack, sym_normalize
from readout_lab.graphkit.types import GraphData, HopStack

__all__ = [
    "GraphData",
    "HopStack",
    "adjacency",
    "align_features",
    "generate_graph_collection",
    "generate_sbm",
    "hop_stack",
    "make_graph",
    "read_edge_list",
    "sym_normalize",
    "write_edge_list",
]
