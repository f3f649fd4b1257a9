from typing import NamedTuple

import numpy as np


class HullSolution(NamedTuple):
    """Projection of one prototype onto the convex hull of the others."""
    distance: float
    weights: np.ndarray
    iterations: int
    residual: float
