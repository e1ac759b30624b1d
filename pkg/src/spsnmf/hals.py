"""Sample-weighted symmetric NMF solved by HALS on a penalized asymmetric split.

The model is

    F(U, V) = 1/2 sum_i w_i ||X[i, :] - (U V^T)[i, :]||^2 + theta/2 ||U - V||_F^2

over ``U, V >= 0``.  Each sample's squared residual row is scaled by its
weight ``w_i``; the penalty pulls the two factors together so that for large
enough ``theta`` the solution is a symmetric factorization ``X ~ U U^T``.
Every column update is the exact minimizer of a coordinate-separable
quadratic, so a sweep never increases ``F``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._errors import ShapeMismatch
from .linalg import FactorPair, as_matrix, frobenius_norm, spectral_norm

__all__ = [
    "SolveTrace",
    "weighted_objective",
    "per_sample_loss",
    "objective_gradient_u",
    "theta_from_bound",
    "update_column_u",
    "update_column_v",
    "hals_sweep",
    "solve_inner",
]


@dataclass
class SolveTrace:
    """Per-sweep history of a solve.

    ``regularizer`` holds the self-paced penalty value for the weights in
    force at each sweep; it is kept apart from ``objective`` so objectives
    from different rounds remain comparable.
    """

    sweep: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    active_samples: list = field(default_factory=list)
    mean_weight: list = field(default_factory=list)
    regularizer: list = field(default_factory=list)
    converged: bool = False

    def record(self, sweep, objective, w, regularizer=0.0):
        if self.sweep and sweep <= self.sweep[-1]:
            raise ValueError("sweep indices must be strictly increasing")
        self.sweep.append(int(sweep))
        self.objective.append(float(objective))
        self.active_samples.append(int(np.count_nonzero(w)))
        self.mean_weight.append(float(np.mean(w)))
        self.regularizer.append(float(regularizer))

    def extend(self, other):
        for t, f, a, m, r in zip(other.sweep, other.objective, other.active_samples,
                                 other.mean_weight, other.regularizer):
            if self.sweep and t <= self.sweep[-1]:
                raise ValueError("sweep indices must be strictly increasing")
            self.sweep.append(t)
            self.objective.append(f)
            self.active_samples.append(a)
            self.mean_weight.append(m)
            self.regularizer.append(r)
        self.converged = other.converged

    def __len__(self):
        return len(self.sweep)


def _check(X, F, w=None):
    X = as_matrix(X, "X")
    if X.shape != (F.n, F.n):
        raise ShapeMismatch(f"X has shape {X.shape}, factors imply {(F.n, F.n)}")
    if w is None:
        return X, None
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (F.n,):
        raise ShapeMismatch(f"weights have shape {w.shape}, expected {(F.n,)}")
    return X, w


def _residual(X, F):
    return X - F.U @ F.V.T


def _objective(R, U, V, w, theta):
    data = 0.5 * float(np.dot(w, np.einsum("ij,ij->i", R, R)))
    return data + 0.5 * theta * frobenius_norm(U - V) ** 2


def weighted_objective(X, F, w, theta):
    """Weighted data term plus the ``theta/2 ||U - V||_F^2`` coupling penalty."""
    X, w = _check(X, F, w)
    return _objective(_residual(X, F), F.U, F.V, w, theta)


def per_sample_loss(X, F):
    """Squared residual norm of every row of ``X - U V^T`` (no 1/2 factor)."""
    X, _ = _check(X, F)
    R = _residual(X, F)
    return np.einsum("ij,ij->i", R, R)


def objective_gradient_u(X, F, w, theta):
    """Gradient of :func:`weighted_objective` with respect to ``U``."""
    X, w = _check(X, F, w)
    R = _residual(X, F)
    return -(w[:, None] * R) @ F.V + theta * (F.U - F.V)


def theta_from_bound(X, U0):
    """Coupling penalty from the initial factor.

    Computes ``b = (||X||_2 + ||X - U0 U0^T||_F) / 2`` and returns the
    smallest integer strictly above ``b``, but at least 1.  Dropping the
    smallest singular value of ``X`` from the bound only enlarges ``b``, so
    the returned value stays sufficient for the factors to agree.
    """
    X = as_matrix(X, "X")
    U0 = as_matrix(U0, "U0")
    if U0.shape[0] != X.shape[0]:
        raise ShapeMismatch(f"U0 has {U0.shape[0]} rows, X has {X.shape[0]}")
    if np.any(U0 < 0):
        raise ValueError("U0 must be nonnegative")
    b = 0.5 * (spectral_norm(X) + frobenius_norm(X - U0 @ U0.T))
    return float(max(1, math.floor(b) + 1))


def update_column_u(Xc, u, v, w, theta):
    """Exact nonnegative minimizer over ``u`` of one column subproblem.

    Minimizes ``1/2 sum_p w_p ||Xc[p, :] - u_p v||^2 + theta/2 ||u - v||^2``.
    The problem separates over coordinates, so clipping each stationary point
    at zero gives the constrained optimum.
    """
    Xc = np.asarray(Xc, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    num = w * (Xc @ v) + theta * v
    den = w * np.dot(v, v) + theta
    return np.maximum(num / den, 0.0)


def update_column_v(Xc, u, v, w, theta):
    """Exact nonnegative minimizer over ``v`` of the same column subproblem.

    ``v_q = max(0, ((Xc^T diag(w) u)_q + theta u_q) / (u^T diag(w) u + theta))``.
    `v` is accepted for symmetry with :func:`update_column_u`; the minimizer
    does not depend on it.
    """
    Xc = np.asarray(Xc, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    wu = np.asarray(w, dtype=np.float64) * u
    num = Xc.T @ wu + theta * u
    den = np.dot(u, wu) + theta
    return np.maximum(num / den, 0.0)


def _sweep_inplace(U, V, R, w, theta):
    """One Gauss-Seidel pass over the columns, updating U, V and R = X - U V^T.

    The column residual ``X_c = R + u_c v_c^T`` is never formed; its products
    with ``v_c`` and ``diag(w) u_c`` are expanded instead.
    """
    for c in range(U.shape[1]):
        u_old = U[:, c].copy()
        v_old = V[:, c].copy()

        vv = np.dot(v_old, v_old)
        Xc_v = R @ v_old + u_old * vv
        u_new = np.maximum((w * Xc_v + theta * v_old) / (w * vv + theta), 0.0)

        wu = w * u_new
        Xc_wu = R.T @ wu + v_old * np.dot(u_old, wu)
        v_new = np.maximum((Xc_wu + theta * u_new) / (np.dot(u_new, wu) + theta), 0.0)

        R -= np.column_stack((u_new, -u_old)) @ np.column_stack((v_new, v_old)).T
        U[:, c] = u_new
        V[:, c] = v_new


def hals_sweep(X, F, w, theta):
    """Update every column pair ``(u_c, v_c)`` once, in index order.

    Returns a new :class:`FactorPair`; `F` is left untouched.
    """
    X, w = _check(X, F, w)
    U, V = F.U.copy(), F.V.copy()
    R = X - U @ V.T
    _sweep_inplace(U, V, R, w, theta)
    return FactorPair(U, V)


def solve_inner(X, F, w, theta, n_sweeps, tol=None, f_prev=None, start=0,
                regularizer=0.0):
    """Run `n_sweeps` HALS sweeps at fixed weights and record the objective.

    Parameters
    ----------
    X : ndarray, shape (n, n)
    F : FactorPair
    w : ndarray, shape (n,)
        Sample weights, held fixed.
    theta : float
    n_sweeps : int
        Number of sweeps, at least 1.
    tol : float, optional
        If given, stop after the first sweep whose relative objective
        decrease ``(F_prev - F_t) / F_prev`` is below `tol`, and mark the
        trace as converged.
    f_prev : float, optional
        Objective before the first sweep, for the relative-decrease test.
        Computed when `tol` is set and this is omitted.
    start : int
        Sweep index of the first recorded sweep.
    regularizer : float
        Self-paced penalty value stored alongside each record.

    Returns
    -------
    (FactorPair, SolveTrace)
    """
    if n_sweeps < 1:
        raise ValueError("n_sweeps must be >= 1")
    X, w = _check(X, F, w)
    U, V = F.U.copy(), F.V.copy()
    trace = SolveTrace()
    R = X - U @ V.T
    if tol is not None and f_prev is None:
        f_prev = _objective(R, U, V, w, theta)

    for t in range(start, start + n_sweeps):
        _sweep_inplace(U, V, R, w, theta)
        # fresh residual each sweep: no drift from the rank-one updates
        R = X - U @ V.T
        f_t = _objective(R, U, V, w, theta)
        trace.record(t, f_t, w, regularizer)
        if tol is not None:
            if f_prev <= 0.0 or (f_prev - f_t) / f_prev < tol:
                trace.converged = True
                break
            f_prev = f_t
    return FactorPair(U, V), trace
