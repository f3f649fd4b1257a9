"""Plain-text edge-list files.

Grammar (blank lines and lines starting with '#' are ignored)::

    n <count>
    <u> <v>          one line per undirected edge, 0-based node ids
    labels           optional section header
    <class id>       exactly one line per node, in node order
"""

from pathlib import Path
from typing import List, Optional

import numpy as np

from readout_lab.errors import ValidationError
from readout_lab.graphkit.generate import make_graph
from readout_lab.graphkit.types import GraphData
from readout_lab.utils import get_logger

logger = get_logger(__name__)


def _parse_int(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ValidationError(f"Line {line_no}: expected an integer, got {token!r}") from None


def read_edge_list(path: Path | str) -> GraphData:
    """Parse an edge-list file into a validated GraphData."""
    path = Path(path)
    lines = [
        (number, line.strip())
        for number, line in enumerate(path.read_text().splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ValidationError(f"{path}: empty graph file")

    number, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise ValidationError(f"Line {number}: expected 'n <count>', got {header!r}")
    n = _parse_int(parts[1], number)

    edges: List[tuple[int, int]] = []
    labels: Optional[List[int]] = None
    for number, line in lines[1:]:
        if line == "labels":
            if labels is not None:
                raise ValidationError(f"Line {number}: duplicate labels section")
            labels = []
            continue
        parts = line.split()
        if labels is not None:
            if len(parts) != 1:
                raise ValidationError(f"Line {number}: expected one class id, got {line!r}")
            labels.append(_parse_int(parts[0], number))
        else:
            if len(parts) != 2:
                raise ValidationError(f"Line {number}: expected '<u> <v>', got {line!r}")
            edges.append((_parse_int(parts[0], number), _parse_int(parts[1], number)))

    if labels is not None and len(labels) != n:
        raise ValidationError(f"{path}: labels section has {len(labels)} entries, expected {n}")
    graph = make_graph(n, edges, node_labels=labels)
    logger.debug(f"Graph loaded: path={path}, n={n}, edges={graph.n_edges}")
    return graph


def write_edge_list(G: GraphData, path: Path | str) -> Path:
    """Write G in the edge-list grammar; node labels are written when present."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"n {G.n}"]
    lines.extend(f"{u} {v}" for u, v in np.asarray(G.edges).tolist())
    if G.node_labels is not None:
        lines.append("labels")
        lines.extend(str(int(label)) for label in G.node_labels)
    path.write_text("\n".join(lines) + "\n")
    return path
