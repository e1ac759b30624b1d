"""Independent oracles shared by the test modules.

None of these call into spsnmf, so they can check it from the outside.
"""

import itertools
import math

import numpy as np
import pytest


def jacobi_eigenvalues(A, sweeps=100, tol=1e-15):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * max(1.0, np.abs(A).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return np.diag(A)


def golden_section_min(f, lo, hi, tol=1e-12, max_iter=500):
    """Minimizer of a unimodal scalar function on [lo, hi]."""
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = (a + b) / 2
    # the clipped optimum may sit exactly on the lower bound
    return lo if f(lo) <= f(x) else x


def brute_force_accuracy(pred, truth):
    """Best matched fraction over every injective map of predicted classes."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    p_classes = list(np.unique(pred))
    t_classes = list(np.unique(truth))
    best = 0
    slots = t_classes + [None] * len(p_classes)
    for perm in itertools.permutations(slots, len(p_classes)):
        used = [t for t in perm if t is not None]
        if len(used) != len(set(used)):
            continue
        hits = sum(np.sum((pred == pc) & (truth == tc)) for pc, tc in zip(p_classes, perm)
                   if tc is not None)
        best = max(best, hits)
    return best / pred.size


def coordinate_oracle(Xc, u, v, w, theta, which, hi=100.0):
    """Per-coordinate golden-section minimizer of the column subproblem.

    Both the u- and the v-subproblem separate over coordinates, so each
    entry is found by an independent scalar search on [0, hi].
    """
    n = len(u)
    out = np.empty(n)
    for p in range(n):
        if which == "u":
            def f(t, p=p):
                return (0.5 * w[p] * sum((Xc[p][q] - t * v[q]) ** 2 for q in range(n))
                        + 0.5 * theta * (t - v[p]) ** 2)
        else:
            def f(t, p=p):
                return (0.5 * sum(w[r] * (Xc[r][p] - u[r] * t) ** 2 for r in range(n))
                        + 0.5 * theta * (u[p] - t) ** 2)
        out[p] = golden_section_min(f, 0.0, hi)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20221005)
