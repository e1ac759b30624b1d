"""Small synthetic problems for demos and tests."""

import numpy as np

__all__ = ["make_blobs", "block_diagonal_similarity", "corrupt_similarity"]


def make_blobs(n_per_cluster=20, k=3, spread=0.1, separation=5.0, dim=2, seed=0):
    """Isotropic Gaussian blobs with centres on a regular simplex-like layout.

    Centres are ``separation`` times scaled unit vectors placed on a circle in
    the first two coordinates, so every pair of adjacent centres is at least
    `separation` apart for ``k >= 2``.

    Returns
    -------
    features : ndarray, shape (n_per_cluster * k, dim)
    labels : ndarray of int, shape (n_per_cluster * k,)
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(k) / k
    # circle radius so that neighbouring centres sit exactly `separation` apart
    radius = separation / (2 * np.sin(np.pi / k)) if k > 1 else 0.0
    centres = np.zeros((k, dim))
    centres[:, 0] = radius * np.cos(angles)
    centres[:, 1] = radius * np.sin(angles)
    labels = np.repeat(np.arange(k), n_per_cluster)
    features = centres[labels] + spread * rng.standard_normal((labels.size, dim))
    return features, labels


def block_diagonal_similarity(sizes, within=1.0, between=0.0):
    """Block-structured affinity matrix with a zero diagonal.

    Returns the matrix and the block id of every sample.
    """
    labels = np.repeat(np.arange(len(sizes)), sizes)
    X = np.where(labels[:, None] == labels[None, :], within, between).astype(np.float64)
    np.fill_diagonal(X, 0.0)
    return X, labels


def corrupt_similarity(X, idx, low=0.0, high=1.0, seed=0):
    """Replace rows and columns `idx` of `X` by uniform noise, keeping symmetry.

    The corrupted samples end up weakly attached to every other sample,
    which gives them large reconstruction residuals.
    """
    X = np.array(X, dtype=np.float64)
    idx = np.asarray(idx)
    rng = np.random.default_rng(seed)
    noise = rng.uniform(low, high, size=(idx.size, X.shape[0]))
    X[idx, :] = noise
    X[:, idx] = noise.T
    # overlapping block of two corrupted samples: symmetrize
    block = np.ix_(idx, idx)
    X[block] = np.triu(X[block]) + np.triu(X[block], 1).T
    X[idx, idx] = 0.0
    return X
