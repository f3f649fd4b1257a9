"""Interior-class flagging from full-dimensional hull distances and a 2-D PCA hull."""

from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull

from readout_lab.config import settings
from readout_lab.errors import DegeneracyError, ParameterError
from readout_lab.geometry.hull import hull_distance, mean_pairwise_distance
from readout_lab.models import ClassHull, HullReport
from readout_lab.numcore import as_matrix, pca_project
from readout_lab.utils import get_logger

logger = get_logger(__name__)

COLLINEAR_RTOL = 1e-9


def _hull_vertices(coords: np.ndarray) -> tuple[list[int], bool]:
    """
    Vertex indices of the 2-D hull and whether the points are collinear.

    Collinear points have a segment as hull; the points at its two ends are the vertices.
    """
    spread = np.linalg.svd(coords - coords.mean(axis=0), compute_uv=False)
    if spread[1] > COLLINEAR_RTOL * spread[0]:
        return sorted(int(v) for v in ConvexHull(coords).vertices), False
    axis = coords[:, 0] if np.ptp(coords[:, 0]) >= np.ptp(coords[:, 1]) else coords[:, 1]
    tol = COLLINEAR_RTOL * max(float(np.ptp(axis)), 1.0)
    ends = np.flatnonzero((axis <= axis.min() + tol) | (axis >= axis.max() - tol))
    return sorted(int(v) for v in ends), True


def interior_cutoff(vertex_distances, normalizer: float, hull_tol: float) -> float:
    """A class is interior when its hull distance is strictly below this value."""
    return min(vertex_distances) - hull_tol * normalizer


def flag_interior(P, hull_tol: Optional[float] = None) -> HullReport:
    """
    Flag classes whose hull distance is below that of every outer-hull class.

    Hull distances are computed in full dimension; the outer hull is taken on
    the 2-D PCA projection. A class is flagged when d_CH < interior_cutoff,
    i.e. below the smallest outer-hull d_CH by more than hull_tol (default
    settings.hull_tol) times the mean pairwise distance; hull_tol = 0 is the
    plain strict comparison. A collinear projection is reported as a
    degenerate hull whose vertices are the two ends of the segment.

    Raises:
        ParameterError: C < 3, d_z < 2 or hull_tol < 0
        DegeneracyError: all prototypes coincide
    """
    hull_tol = settings.hull_tol if hull_tol is None else hull_tol
    if hull_tol < 0:
        raise ParameterError(f"hull_tol must be >= 0, got {hull_tol}")
    P = as_matrix(P, "P")
    C, d = P.shape
    if C < 3 or d < 2:
        raise ParameterError(f"Interior flagging needs C >= 3 and d_z >= 2, got C={C}, d_z={d}")
    normalizer = mean_pairwise_distance(P)
    if normalizer == 0.0:
        raise DegeneracyError("All prototypes are identical; PCA projection is undefined")

    solutions = [hull_distance(P, c) for c in range(C)]
    coords = pca_project(P, 2)
    vertices, degenerate = _hull_vertices(coords)
    if degenerate:
        logger.warning(f"Collinear PCA projection, outer hull is a segment: C={C}")
    cutoff = interior_cutoff([solutions[v].distance for v in vertices], normalizer, hull_tol)

    classes = []
    for c, solution in enumerate(solutions):
        classes.append(
            ClassHull(
                class_index=c,
                d_ch=solution.distance,
                d_ch_norm=solution.distance / normalizer,
                other_classes=[k for k in range(C) if k != c],
                weights=solution.weights.tolist(),
                interior_flag=bool(solution.distance < cutoff),
                on_outer_hull=c in vertices,
            )
        )
    report = HullReport(
        classes=classes,
        mean_pairwise_distance=normalizer,
        pca_coordinates=[(float(x), float(y)) for x, y in coords],
        hull_vertices=vertices,
        degenerate_hull=degenerate,
    )
    logger.debug(f"Hull audit: C={C}, flagged={report.flagged}, vertices={vertices}")
    return report
