"""Gaussian embedding geometries for the controlled experiments."""

from typing import NamedTuple, Tuple

import numpy as np

from readout_lab.errors import ParameterError
from readout_lab.readouts import fit_prototypes, one_hot


class Split(NamedTuple):
    Z_s: np.ndarray
    y_s: np.ndarray
    Z_q: np.ndarray
    y_q: np.ndarray

    @property
    def Y_s(self) -> np.ndarray:
        return one_hot(self.y_s, int(max(self.y_s.max(), self.y_q.max())) + 1)


def orthonormal_directions(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """d x k matrix with orthonormal columns, uniformly oriented."""
    if k > d:
        raise ParameterError(f"Cannot draw {k} orthonormal directions in {d} dimensions")
    Q, R = np.linalg.qr(rng.standard_normal((d, k)))
    return Q * np.sign(np.diag(R))


def split_half(Z: np.ndarray, labels: np.ndarray, rng: np.random.Generator) -> Split:
    """Stratified 50/50 support/query split; odd class sizes put the extra row in support."""
    support, query = [], []
    for cls in np.unique(labels):
        members = rng.permutation(np.flatnonzero(labels == cls))
        cut = (members.size + 1) // 2
        support.append(members[:cut])
        query.append(members[cut:])
    s = np.concatenate(support)
    q = np.concatenate(query)
    return Split(Z[s], labels[s], Z[q], labels[q])


def two_clusters(n: int, d: int, margin: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Balanced unit-variance clusters at -margin/2 u and +margin/2 u; returns Z, labels, u."""
    u = orthonormal_directions(d, 1, rng)[:, 0]
    labels = np.repeat([0, 1], [n // 2, n - n // 2])
    centers = np.where(labels[:, None] == 0, -0.5 * margin, 0.5 * margin) * u[None, :]
    return centers + rng.standard_normal((n, d)), labels, u


def mode_offsets(delta: float, radius: float = 12.0, collapse_at: float = 3.0) -> Tuple[float, float]:
    """
    (height, half_gap) of the bimodal modes for separation delta.

    The modes sit at height * w +/- half_gap * v around the B-C midpoint, on a
    circle of the given radius: coincident at delta = 0, on opposite sides of
    the B-C axis with their mean on it from delta = collapse_at on.
    """
    if delta < 0:
        raise ParameterError(f"delta must be >= 0, got {delta}")
    angle = 0.5 * np.pi * min(delta / collapse_at, 1.0)
    height = 0.0 if delta >= collapse_at else radius * float(np.cos(angle))
    return height, radius * float(np.sin(angle))


def bimodal_split(
    delta: float,
    rng: np.random.Generator,
    d: int = 64,
    n_unimodal: int = 100,
    n_mode: int = 50,
    spread: float = 3.0,
    radius: float = 12.0,
    collapse_at: float = 3.0,
) -> Split:
    """
    Three classes: A (label 0) bimodal, B (1) and C (2) unimodal, 50/50 split.

    B and C are centered at -spread u and +spread u. A's modes sit at
    m + height w +/- half_gap v (see mode_offsets), where m is the midpoint of
    the B and C support prototypes, and A is shifted so its support mean is
    exactly m + height w. From delta = collapse_at on, the A prototype is the
    midpoint of the other two.
    """
    u, v, w = orthonormal_directions(d, 3, rng).T
    B = -spread * u + rng.standard_normal((n_unimodal, d))
    C = spread * u + rng.standard_normal((n_unimodal, d))
    split_b = split_half(B, np.zeros(n_unimodal, dtype=np.int64), rng)
    split_c = split_half(C, np.zeros(n_unimodal, dtype=np.int64), rng)
    midpoint = 0.5 * (split_b.Z_s.mean(axis=0) + split_c.Z_s.mean(axis=0))
    height, half_gap = mode_offsets(delta, radius, collapse_at)
    target = midpoint + height * w

    signs = np.repeat([1.0, -1.0], n_mode)
    A = target + half_gap * signs[:, None] * v[None, :] + rng.standard_normal((2 * n_mode, d))
    # Stratify over the two modes so both halves keep the symmetric layout
    split_a = split_half(A, (signs < 0).astype(np.int64), rng)
    shift = target - split_a.Z_s.mean(axis=0)
    A_s = split_a.Z_s + shift
    A_q = split_a.Z_q + shift

    def labelled(rows, label):
        return np.full(rows.shape[0], label, dtype=np.int64)

    return Split(
        Z_s=np.vstack([A_s, split_b.Z_s, split_c.Z_s]),
        y_s=np.concatenate([labelled(A_s, 0), labelled(split_b.Z_s, 1), labelled(split_c.Z_s, 2)]),
        Z_q=np.vstack([A_q, split_b.Z_q, split_c.Z_q]),
        y_q=np.concatenate([labelled(A_q, 0), labelled(split_b.Z_q, 1), labelled(split_c.Z_q, 2)]),
    )


def calibration_geometry(
    kind: str,
    rng: np.random.Generator,
    n: int = 500,
    C: int = 5,
    d: int = 64,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Class-balanced Gaussian embeddings for the calibration suite.

    origin-shifted: means 4 e_c in a random orthonormal basis, then every point
    moved by 10x the mean pairwise mean distance along a random unit direction.
    varying-radius: means r_c * 3 e_c with radii evenly spaced in [1, 5].
    collapsed: every class centered at the origin.
    """
    basis = orthonormal_directions(d, C, rng)
    labels = np.arange(n) % C
    if kind == "origin-shifted":
        means = 4.0 * basis.T
        distances = [np.linalg.norm(means[i] - means[j]) for i in range(C) for j in range(i + 1, C)]
        direction = rng.standard_normal(d)
        direction /= np.linalg.norm(direction)
        means = means + 10.0 * float(np.mean(distances)) * direction[None, :]
    elif kind == "varying-radius":
        radii = np.linspace(1.0, 5.0, C)
        means = 3.0 * radii[:, None] * basis.T
    elif kind == "collapsed":
        means = np.zeros((C, d))
    else:
        raise ParameterError(f"Unknown calibration geometry: {kind}")
    return means[labels] + rng.standard_normal((n, d)), labels


def prototype_matrix(split: Split) -> np.ndarray:
    return fit_prototypes(split.Z_s, split.Y_s).prototypes
