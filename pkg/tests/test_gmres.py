"""GMRES: exactness, stagnation, and the minimal-residual property."""

import numpy as np
import pytest

from aafp import CsrMatrix, StopRule, gmres_solve, mat_vec, norm2
from aafp.problems import SeededRng, build_permutation_system, build_poisson_fd


def test_identity_converges_immediately():
    a = CsrMatrix.from_dense(np.eye(4))
    b = np.array([1.0, -2.0, 3.0, 0.5])
    result = gmres_solve(a, b, np.zeros(4), StopRule(rel_tol=1e-12))
    assert result.converged
    assert result.iterations == 1
    assert np.allclose(result.solution, b, atol=1e-14)


def test_permutation_stagnates_until_exact():
    # cyclic shift with x0 = 0: every Krylov vector is a shifted basis
    # vector, so the residual stays at 1 until the space closes at n
    n = 32
    a, b = build_permutation_system(n)
    result = gmres_solve(a, b, np.zeros(n), StopRule(rel_tol=1e-8, max_iters=100))
    assert result.converged
    assert result.iterations == n
    for k in range(n):
        assert result.residual_norms[k] == pytest.approx(1.0, abs=1e-12)
    assert result.residual_norms[n] == pytest.approx(0.0, abs=1e-10)
    exact = np.zeros(n)
    exact[-1] = 1.0
    assert norm2(result.solution - exact) < 1e-10


def test_residual_norms_never_increase():
    a, b, _ = build_poisson_fd(7)
    result = gmres_solve(a, b, np.zeros(49), StopRule(rel_tol=1e-10, max_iters=200))
    assert result.converged
    norms = result.residual_norms
    for i in range(len(norms) - 1):
        assert norms[i + 1] <= norms[i] + 1e-14


def test_implicit_residual_matches_true_residual():
    a, b, _ = build_poisson_fd(5)
    result = gmres_solve(a, b, np.zeros(25), StopRule(rel_tol=1e-10, max_iters=100))
    true_norm = norm2(b - mat_vec(a, result.solution))
    assert result.residual_norms[-1] == pytest.approx(true_norm, rel=1e-8, abs=1e-12)


def test_minimal_residual_against_brute_force():
    # at step k the GMRES residual is the best over the affine Krylov
    # space; compare against a dense polynomial least-squares solve
    rng = SeededRng(23)
    n = 12
    dense = np.eye(n) + 0.4 * rng.normal(n * n).reshape(n, n) / np.sqrt(n)
    a = CsrMatrix.from_dense(dense)
    b = rng.normal(n)
    result = gmres_solve(a, b, np.zeros(n), StopRule(rel_tol=1e-13, max_iters=n), keep_iterates=True)
    for k in range(1, min(6, result.iterations + 1)):
        krylov = np.column_stack([np.linalg.matrix_power(dense, j) @ b for j in range(k)])
        coeffs, *_ = np.linalg.lstsq(dense @ krylov, b, rcond=None)
        best = norm2(b - dense @ (krylov @ coeffs))
        assert result.residual_norms[k] == pytest.approx(best, rel=1e-8, abs=1e-12)
        # reconstructed iterate lives in the Krylov space and matches its residual
        xk = result.iterates[k]
        assert norm2(b - dense @ xk) == pytest.approx(result.residual_norms[k], rel=1e-8, abs=1e-12)


def test_nonzero_initial_guess():
    a, b, _ = build_poisson_fd(4)
    x0 = np.linspace(0.0, 1.0, 16)
    result = gmres_solve(a, b, x0, StopRule(rel_tol=1e-10, max_iters=60))
    assert result.converged
    assert norm2(b - mat_vec(a, result.solution)) <= 1e-10 * norm2(b - mat_vec(a, x0)) * 1.01


def test_max_iters_caps_work():
    a, b = build_permutation_system(20)
    result = gmres_solve(a, b, np.zeros(20), StopRule(rel_tol=1e-8, max_iters=5))
    assert not result.converged
    assert result.iterations == 5
    assert len(result.residual_norms) == 6


def test_step_elapsed_is_cumulative():
    a, b, _ = build_poisson_fd(5)
    result = gmres_solve(a, b, np.zeros(25), StopRule(rel_tol=1e-10, max_iters=100))
    assert len(result.step_elapsed) == len(result.residual_norms)
    assert all(y >= x for x, y in zip(result.step_elapsed, result.step_elapsed[1:]))
