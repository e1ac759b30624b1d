"""k-nearest-neighbour similarity graphs with a self-tuning Gaussian kernel."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ._errors import InvalidK
from .linalg import as_matrix, validate_similarity

__all__ = ["GraphConfig", "pairwise_sq_dists", "knn_sets", "build_similarity"]


@dataclass(frozen=True)
class GraphConfig:
    """Parameters of the k-NN affinity graph.

    Attributes
    ----------
    k_nn : int
        Number of neighbours per sample.  Also selects the neighbour whose
        distance sets the local kernel scale.
    sigma_floor : float
        Lower bound on the local scale, keeps duplicate points finite.
    """

    k_nn: int = 7
    sigma_floor: float = 1e-12

    def __post_init__(self):
        if self.k_nn < 1:
            raise InvalidK(f"k_nn must be >= 1, got {self.k_nn}")
        if not self.sigma_floor > 0:
            raise ValueError("sigma_floor must be positive")


def pairwise_sq_dists(features):
    """Squared Euclidean distance matrix between the rows of `features`.

    Each pair is computed from coordinate differences (no Gram-matrix
    expansion), so the result is exactly symmetric with an exact zero diagonal.
    """
    X = as_matrix(features, "features")
    if X.shape[0] < 2:
        raise ValueError("need at least two samples")
    D = squareform(pdist(X, metric="sqeuclidean"))
    np.maximum(D, 0.0, out=D)
    return D


def knn_sets(D, k_nn):
    """Indices of the `k_nn` nearest neighbours of every sample.

    Returns an int array of shape (n, k_nn); row ``i`` lists neighbours of
    ``i`` (never ``i`` itself) by increasing distance, ties going to the
    smaller index.
    """
    D = as_matrix(D, "distance matrix")
    n = D.shape[0]
    if not 1 <= k_nn < n:
        raise InvalidK(f"k_nn must satisfy 1 <= k_nn < n={n}, got {k_nn}")
    D = D.copy()
    np.fill_diagonal(D, np.inf)
    # stable sort keeps index order among equal distances
    order = np.argsort(D, axis=1, kind="stable")
    return order[:, :k_nn]


def build_similarity(features, cfg=None):
    """Symmetric k-NN affinity matrix of the rows of `features`.

    ``A[i, j] = exp(-d_ij^2 / (sigma_i sigma_j))`` whenever ``j`` is among the
    neighbours of ``i`` or vice versa, and 0 otherwise.  ``sigma_i`` is the
    distance from ``i`` to its ``k_nn``-th neighbour, floored at
    ``cfg.sigma_floor``.  The diagonal is zero.
    """
    cfg = GraphConfig() if cfg is None else cfg
    D = pairwise_sq_dists(features)
    nbrs = knn_sets(D, cfg.k_nn)
    n = D.shape[0]
    rows = np.arange(n)

    sigma = np.maximum(np.sqrt(D[rows, nbrs[:, -1]]), cfg.sigma_floor)
    mask = np.zeros((n, n), dtype=bool)
    mask[rows[:, None], nbrs] = True
    mask |= mask.T
    np.fill_diagonal(mask, False)

    A = np.zeros((n, n))
    A[mask] = np.exp(-D[mask] / np.outer(sigma, sigma)[mask])
    return validate_similarity(A, zero_diagonal=True)
