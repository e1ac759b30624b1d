import math

import numpy as np
import pytest

from spsnmf import (
    FactorPair,
    hals_sweep,
    per_sample_loss,
    rank_one_residual,
    solve_inner,
    theta_from_bound,
    update_column_u,
    update_column_v,
    weighted_objective,
)
from spsnmf._errors import ShapeMismatch
from spsnmf.hals import objective_gradient_u

from conftest import coordinate_oracle


def _random_instance(rng, n, k):
    A = rng.random((n, n))
    X = (A + A.T) / 2
    F = FactorPair(rng.random((n, k)), rng.random((n, k)))
    w = rng.random(n)
    return X, F, w


class TestObjective:
    def test_examples(self):
        Z = FactorPair(np.zeros((2, 1)), np.zeros((2, 1)))
        assert weighted_objective(np.eye(2), Z, [1, 1], 3.0) == 1.0
        assert weighted_objective(np.eye(2), Z, [1, 0], 3.0) == 0.5
        U = np.array([[1.0, 0.0], [0.5, 2.0]])
        F = FactorPair(U, U.copy())
        assert weighted_objective(U @ U.T, F, [1, 1], 7.0) == 0.0

    def test_loss_examples(self):
        Z = FactorPair(np.zeros((2, 1)), np.zeros((2, 1)))
        np.testing.assert_array_equal(per_sample_loss(np.eye(2), Z), [1, 1])
        np.testing.assert_array_equal(per_sample_loss([[0, 2], [2, 0]], Z), [4, 4])
        U = np.array([[1.0], [2.0]])
        np.testing.assert_array_equal(per_sample_loss(U @ U.T, FactorPair(U, U.copy())), [0, 0])

    def test_shape_mismatch(self):
        F = FactorPair(np.zeros((3, 1)), np.zeros((3, 1)))
        with pytest.raises(ShapeMismatch):
            weighted_objective(np.eye(2), F, [1, 1], 1.0)
        with pytest.raises(ShapeMismatch):
            weighted_objective(np.eye(3), F, [1, 1], 1.0)
        with pytest.raises(ShapeMismatch):
            per_sample_loss(np.eye(2), F)

    def test_loss_is_unweighted_row_residual(self, rng):
        X, F, w = _random_instance(rng, 6, 2)
        l = per_sample_loss(X, F)
        assert weighted_objective(X, F, w, 0.0) == pytest.approx(0.5 * np.dot(w, l), rel=1e-12)


class TestTheta:
    def test_examples(self):
        assert theta_from_bound(np.eye(2), np.zeros((2, 1))) == 2
        assert 0.5 * (1 + math.sqrt(2)) == pytest.approx(1.2071, abs=1e-4)
        assert theta_from_bound(np.zeros((2, 2)), np.zeros((2, 1))) == 1
        assert theta_from_bound(4 * np.eye(2), np.zeros((2, 1))) == 5

    def test_strictly_above_bound(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 10))
            A = rng.random((n, n))
            X = A + A.T
            U0 = rng.random((n, 2))
            s = np.linalg.svd(X, compute_uv=False)
            bound = 0.5 * (s[0] + np.linalg.norm(X - U0 @ U0.T) - s[-1])
            theta = theta_from_bound(X, U0)
            assert theta > bound
            assert theta == int(theta) and theta >= 1


class TestColumnUpdates:
    def test_u_examples(self):
        np.testing.assert_allclose(
            update_column_u(np.ones((2, 2)), None, [1, 1], [1, 1], 1.0), [1, 1])
        np.testing.assert_allclose(
            update_column_u([[4, 0], [0, 0]], None, [1, 0], [1, 1], 1.0), [2.5, 0])
        np.testing.assert_array_equal(update_column_u([[-1.0]], None, [1.0], [1.0], 0.5), [0.0])
        # unclipped stationary point of the last case
        assert (-1 + 0.5) / (1 + 0.5) == pytest.approx(-1 / 3)

    def test_v_examples(self):
        np.testing.assert_allclose(
            update_column_v(np.ones((2, 2)), [1, 1], None, [1, 1], 1.0), [1, 1])
        np.testing.assert_array_equal(
            update_column_v(np.random.default_rng(0).random((3, 3)), [0, 0, 0], None, [1, 1, 1], 1.0),
            [0, 0, 0])
        np.testing.assert_allclose(
            update_column_v([[4, 0], [0, 0]], [1, 0], None, [1, 1], 1.0), [2.5, 0])

    @pytest.mark.parametrize("which", ["u", "v"])
    def test_matches_golden_section(self, rng, which):
        for _ in range(50):
            n = int(rng.integers(1, 7))
            Xc = rng.standard_normal((n, n))
            u, v = rng.random(n), rng.random(n)
            w = rng.random(n)
            theta = float(rng.uniform(0.1, 3))
            if which == "u":
                got = update_column_u(Xc, u, v, w, theta)
            else:
                got = update_column_v(Xc, u, v, w, theta)
            x = coordinate_oracle(Xc, u, v, w, theta, which)
            np.testing.assert_allclose(got, x, atol=1e-6)

    def test_zero_columns_stay_finite(self):
        z = np.zeros(4)
        with np.errstate(all="raise"):
            assert np.all(update_column_u(np.ones((4, 4)), z, z, np.ones(4), 1.0) == 0)
            assert np.all(update_column_v(np.ones((4, 4)), z, z, np.zeros(4), 1.0) == 0)


class TestSweep:
    def test_fixed_point(self):
        U = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
        F = FactorPair(U, U.copy())
        G = hals_sweep(U @ U.T, F, np.ones(3), 4.0)
        np.testing.assert_allclose(G.U, U, atol=1e-10)
        np.testing.assert_allclose(G.V, U, atol=1e-10)

    def test_monotone(self, rng):
        for _ in range(100):
            n, k = int(rng.integers(2, 21)), int(rng.integers(1, 5))
            X, F, w = _random_instance(rng, n, k)
            theta = float(rng.uniform(0.1, 10))
            before = weighted_objective(X, F, w, theta)
            after = weighted_objective(X, hals_sweep(X, F, w, theta), w, theta)
            assert after <= before + 1e-12 * (1 + abs(before))

    def test_matches_direct_residual_path(self, rng):
        for _ in range(20):
            n, k = int(rng.integers(2, 10)), int(rng.integers(1, 5))
            X, F, w = _random_instance(rng, n, k)
            theta = 2.0
            U, V = F.U.copy(), F.V.copy()
            for c in range(k):
                Xc = rank_one_residual(X, FactorPair(U, V), c)
                U[:, c] = update_column_u(Xc, U[:, c], V[:, c], w, theta)
                V[:, c] = update_column_v(Xc, U[:, c], V[:, c], w, theta)
            G = hals_sweep(X, F, w, theta)
            np.testing.assert_allclose(G.U, U, atol=1e-10)
            np.testing.assert_allclose(G.V, V, atol=1e-10)

    def test_single_column(self, rng):
        X, F, w = _random_instance(rng, 5, 1)
        u = update_column_u(X, F.U[:, 0], F.V[:, 0], w, 1.5)
        v = update_column_v(X, u, F.V[:, 0], w, 1.5)
        G = hals_sweep(X, F, w, 1.5)
        np.testing.assert_allclose(G.U[:, 0], u, atol=1e-12)
        np.testing.assert_allclose(G.V[:, 0], v, atol=1e-12)

    def test_input_untouched(self, rng):
        X, F, w = _random_instance(rng, 5, 2)
        U0 = F.U.copy()
        hals_sweep(X, F, w, 1.0)
        np.testing.assert_array_equal(F.U, U0)


def test_gradient_against_finite_differences(rng):
    h = 1e-5
    for _ in range(50):
        n, k = int(rng.integers(2, 8)), int(rng.integers(1, 4))
        X, F, w = _random_instance(rng, n, k)
        F = FactorPair(F.U + 0.1, F.V + 0.1)
        theta = float(rng.uniform(0.5, 5))
        G = objective_gradient_u(X, F, w, theta)
        fd = np.empty_like(G)
        for p in range(n):
            for c in range(k):
                Up, Um = F.U.copy(), F.U.copy()
                Up[p, c] += h
                Um[p, c] -= h
                fd[p, c] = (weighted_objective(X, FactorPair(Up, F.V), w, theta)
                            - weighted_objective(X, FactorPair(Um, F.V), w, theta)) / (2 * h)
        rel = np.abs(G - fd) / np.maximum(np.abs(fd), 1e-8)
        assert np.all((rel <= 1e-4) | (np.abs(G - fd) <= 1e-8))


class TestSolveInner:
    def test_single_sweep(self, rng):
        X, F, w = _random_instance(rng, 6, 2)
        G, trace = solve_inner(X, F, w, 2.0, 1)
        H = hals_sweep(X, F, w, 2.0)
        np.testing.assert_array_equal(G.U, H.U)
        assert len(trace) == 1
        assert trace.objective[0] == weighted_objective(X, H, w, 2.0)

    def test_trace_nonincreasing(self, rng):
        for _ in range(20):
            X, F, w = _random_instance(rng, int(rng.integers(3, 15)), 3)
            _, trace = solve_inner(X, F, w, 3.0, 15)
            obj = np.array(trace.objective)
            assert np.all(np.diff(obj) <= 1e-12 * (1 + np.abs(obj[:-1])))
            assert trace.sweep == list(range(15))

    def test_zero_weights_pull_u_onto_v(self, rng):
        X, F, _ = _random_instance(rng, 5, 2)
        G, trace = solve_inner(X, F, np.zeros(5), 2.0, 1)
        np.testing.assert_allclose(G.U, F.V)
        np.testing.assert_allclose(G.V, F.V)
        assert trace.objective[0] == pytest.approx(0.0, abs=1e-12)
        assert trace.active_samples[0] == 0

    def test_tolerance_stops_early(self):
        U = np.array([[1.0], [1.0]])
        X = U @ U.T
        _, trace = solve_inner(X, FactorPair(U, U.copy()), np.ones(2), 2.0, 10, tol=1e-6)
        assert trace.converged and len(trace) == 1

    def test_rejects_zero_sweeps(self, rng):
        X, F, w = _random_instance(rng, 3, 1)
        with pytest.raises(ValueError):
            solve_inner(X, F, w, 1.0, 0)
