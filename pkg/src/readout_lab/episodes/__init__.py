"""Task-unified few-shot episodes."""

from readout_lab.episodes.assemble import assemble, assemble_on_tape, episode_targets
from readout_lab.episodes.negatives import NegativePool
from readout_lab.episodes.sampling import (
    sample_edge_episode,
    sample_episode,
    sample_graph_episode,
    sample_node_episode,
)
from readout_lab.episodes.types import AssembledEpisode, Episode

__all__ = [
    "AssembledEpisode",
    "Episode",
    "NegativePool",
    "assemble",
    "assemble_on_tape",
    "episode_targets",
    "sample_edge_episode",
    "sample_episode",
    "sample_graph_episode",
    "sample_node_episode",
]
