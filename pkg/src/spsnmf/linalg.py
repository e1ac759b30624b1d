"""Dense matrix primitives used by the factorization solver."""

import warnings
from dataclasses import dataclass

import numpy as np

from ._errors import IndexOutOfRange, NonConvergenceWarning, ShapeMismatch

__all__ = [
    "FactorPair",
    "as_matrix",
    "validate_similarity",
    "frobenius_norm",
    "spectral_norm",
    "rank_one_residual",
]


def as_matrix(M, name="matrix"):
    """Return `M` as a finite 2-D float64 array, raising on anything else."""
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf")
    return A


def validate_similarity(X, zero_diagonal=False):
    """Check that `X` is a valid similarity matrix and return it as an array.

    A similarity matrix is square, finite, exactly symmetric and entrywise
    nonnegative.  Matrices produced by :func:`spsnmf.graph.build_similarity`
    also have a zero diagonal; pass ``zero_diagonal=True`` to enforce that
    convention as well.
    """
    X = as_matrix(X, "similarity matrix")
    if X.shape[0] != X.shape[1]:
        raise ShapeMismatch(f"similarity matrix must be square, got {X.shape}")
    if not np.array_equal(X, X.T):
        raise ValueError("similarity matrix is not symmetric")
    if np.any(X < 0):
        raise ValueError("similarity matrix has negative entries")
    if zero_diagonal and np.any(np.diag(X) != 0):
        raise ValueError("similarity matrix has a nonzero diagonal")
    return X


@dataclass
class FactorPair:
    """Nonnegative factors ``U`` and ``V`` (both n x k) of ``X ~ U V^T``."""

    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        self.U = as_matrix(self.U, "U")
        self.V = as_matrix(self.V, "V")
        if self.U.shape != self.V.shape:
            raise ShapeMismatch(
                f"U and V must have the same shape, got {self.U.shape} and {self.V.shape}")
        if np.any(self.U < 0) or np.any(self.V < 0):
            raise ValueError("factors must be entrywise nonnegative")

    @property
    def n(self):
        return self.U.shape[0]

    @property
    def k(self):
        return self.U.shape[1]

    def copy(self):
        return FactorPair(self.U.copy(), self.V.copy())


def frobenius_norm(M):
    """Frobenius norm, ``sqrt(sum(M**2))``.  Empty input gives 0."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return 0.0
    return float(np.sqrt(np.sum(M * M)))


def spectral_norm(M, tol=1e-10, max_iter=10000):
    """Largest singular value of a square matrix by power iteration on M^T M.

    The iteration starts from the normalized all-ones vector, so the result is
    a deterministic function of `M`.  Iteration stops when the relative change
    of the estimate drops below `tol`.  If `max_iter` is exhausted first, a
    :class:`NonConvergenceWarning` is emitted and the current estimate is
    returned.

    Parameters
    ----------
    M : array_like, shape (n, n)
    tol : float
        Relative accuracy target, must be positive.
    max_iter : int
        Iteration cap.

    Returns
    -------
    float
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ShapeMismatch(f"spectral_norm expects a square matrix, got {M.shape}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = M.shape[0]
    if n == 0 or not np.any(M):
        return 0.0

    x = np.full(n, 1.0 / np.sqrt(n))
    y = M.T @ (M @ x)
    if not np.any(y):
        # the all-ones start lies in the null space of M^T M; fall back to a
        # fixed non-constant vector so the result stays deterministic
        x = np.linspace(1.0, 2.0, n)
        x /= np.linalg.norm(x)
        y = M.T @ (M @ x)

    estimate = 0.0
    for _ in range(max_iter):
        ynorm = np.linalg.norm(y)
        if ynorm == 0.0:
            return 0.0
        x = y / ynorm
        Mx = M @ x
        # Rayleigh quotient of M^T M at x is ||Mx||^2
        new_estimate = float(np.linalg.norm(Mx))
        if abs(new_estimate - estimate) <= tol * new_estimate:
            return new_estimate
        estimate = new_estimate
        y = M.T @ Mx
    warnings.warn(
        f"spectral_norm did not reach tol={tol} in {max_iter} iterations",
        NonConvergenceWarning, stacklevel=2)
    return estimate


def rank_one_residual(X, F, c):
    """Residual of column `c`: ``X - sum_{j != c} u_j v_j^T``.

    This is the target matrix that the rank-one term ``u_c v_c^T`` fits in a
    single HALS column update.
    """
    X = as_matrix(X, "X")
    if not 0 <= c < F.k:
        raise IndexOutOfRange(f"column index {c} out of range for k={F.k}")
    if X.shape != (F.n, F.n):
        raise ShapeMismatch(f"X has shape {X.shape}, factors imply {(F.n, F.n)}")
    keep = np.arange(F.k) != c
    return X - F.U[:, keep] @ F.V[:, keep].T
