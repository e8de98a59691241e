"""Splitting-method solvers cast as fixed-point maps.

Each problem minimizes f(x) + g(y) subject to G x = y via the scaled
form of the alternating direction method of multipliers. One sweep
updates x by a pre-factorized linear solve, y by a proximal map, and
the scaled multiplier by the constraint gap; iterating the sweep is a
fixed-point map on the stacked vector [y, lambda_bar], which is what
the accelerated solvers consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.sparse

from ..fixedpoint import FixedPointMap
from ..linalg import CsrMatrix, norm2


def soft_threshold(v: np.ndarray, kappa: float) -> np.ndarray:
    """Proximal map of kappa * ||.||_1: shrink each entry toward zero."""
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    v = np.asarray(v, dtype=float)
    return np.maximum(v - kappa, 0.0) + np.minimum(v + kappa, 0.0)


def project_nonneg(v: np.ndarray) -> np.ndarray:
    """Proximal map of the nonnegativity indicator: clip below at zero."""
    return np.maximum(np.asarray(v, dtype=float), 0.0)


@dataclass(frozen=True)
class AdmmProblem:
    """One ADMM instance: constraint G x = y, penalty mu, prox for g.

    solve_x returns argmin_x f(x) + (mu/2) ||G x - v||^2 given v = y -
    lambda_bar; apply_g and apply_gt apply G and its transpose; prox is
    the proximal map of g at penalty mu.
    """

    mu: float
    n_x: int
    n_y: int
    solve_x: Callable[[np.ndarray], np.ndarray]
    apply_g: Callable[[np.ndarray], np.ndarray]
    apply_gt: Callable[[np.ndarray], np.ndarray]
    prox: Callable[[np.ndarray], np.ndarray]

    def split(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=float)
        if z.shape != (2 * self.n_y,):
            raise ValueError(f"state must have length {2 * self.n_y}")
        return z[: self.n_y], z[self.n_y :]

    def join(self, y: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return np.concatenate([y, lam])

    def sweep(self, y: np.ndarray, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """One x -> y -> multiplier update; returns (x, y_next, lam_next)."""
        x = self.solve_x(y - lam)
        gx = self.apply_g(x)
        y_next = self.prox(gx + lam)
        lam_next = lam + gx - y_next
        return x, y_next, lam_next

    def fixed_point_map(self) -> FixedPointMap:
        """The sweep as a fixed-point map on [y, lambda_bar]."""

        def apply(z: np.ndarray) -> np.ndarray:
            y, lam = self.split(z)
            _, y_next, lam_next = self.sweep(y, lam)
            return self.join(y_next, lam_next)

        return FixedPointMap(dimension=2 * self.n_y, eval=apply)

    def recover_x(self, z: np.ndarray) -> np.ndarray:
        """Primal x corresponding to a state [y, lambda_bar]."""
        y, lam = self.split(z)
        return self.solve_x(y - lam)

    def feasibility(self, z: np.ndarray) -> tuple[float, float]:
        """Primal and dual feasibility norms after one sweep from z.

        Primal: ||G x - y_next||. Dual: mu ||G^T (y_next - y)||, the
        optimality gap left in the x-update by moving y.
        """
        y, lam = self.split(z)
        x, y_next, _ = self.sweep(y, lam)
        primal = norm2(self.apply_g(x) - y_next)
        dual = self.mu * norm2(self.apply_gt(y_next - y))
        return primal, dual


def difference_matrix(n: int) -> CsrMatrix:
    """(n-1) x n first-difference matrix: row i is e_(i+1) - e_i."""
    if n < 2:
        raise ValueError("n must be at least 2")
    data = np.concatenate([-np.ones(n - 1), np.ones(n - 1)])
    rows = np.concatenate([np.arange(n - 1), np.arange(n - 1)])
    cols = np.concatenate([np.arange(n - 1), np.arange(1, n)])
    return CsrMatrix.from_coo(n - 1, n, rows, cols, data)


def tv_denoise_problem(x_hat: np.ndarray, beta: float, mu: float) -> AdmmProblem:
    """Total-variation denoising min 0.5 ||x_hat - x||^2 + beta ||G x||_1.

    G is the first-difference matrix; the x-update solves the banded
    SPD system (I + mu G^T G) x = x_hat + mu G^T v, factorized once.
    """
    x_hat = np.asarray(x_hat, dtype=float)
    n = x_hat.size
    g = difference_matrix(n)
    g_sp = g.to_scipy()
    h = (scipy.sparse.identity(n) + mu * (g_sp.T @ g_sp)).toarray()
    # tridiagonal: keep only the two upper bands
    bands = np.zeros((2, n))
    bands[0, 1:] = np.diag(h, 1)
    bands[1, :] = np.diag(h)
    cho = scipy.linalg.cholesky_banded(bands)

    def solve_x(v: np.ndarray) -> np.ndarray:
        return scipy.linalg.cho_solve_banded((cho, False), x_hat + mu * (g_sp.T @ v))

    return AdmmProblem(
        mu=mu,
        n_x=n,
        n_y=n - 1,
        solve_x=solve_x,
        apply_g=lambda x: g_sp @ x,
        apply_gt=lambda y: g_sp.T @ y,
        prox=lambda v: soft_threshold(v, beta / mu),
    )


def lasso_problem(c: CsrMatrix, x_hat: np.ndarray, beta: float, mu: float) -> AdmmProblem:
    """Lasso min 0.5 ||C x - x_hat||^2 + beta ||x||_1 with splitting x = y.

    The x-update solves (C^T C + mu I) x = C^T x_hat + mu v by a dense
    Cholesky factorization computed once.
    """
    x_hat = np.asarray(x_hat, dtype=float)
    if x_hat.shape != (c.rows,):
        raise ValueError("dimension mismatch between C and x_hat")
    n = c.cols
    c_sp = c.to_scipy()
    h = (c_sp.T @ c_sp).toarray() + mu * np.eye(n)
    cho = scipy.linalg.cho_factor(h)
    ct_xhat = c_sp.T @ x_hat

    def solve_x(v: np.ndarray) -> np.ndarray:
        return scipy.linalg.cho_solve(cho, ct_xhat + mu * v)

    return AdmmProblem(
        mu=mu,
        n_x=n,
        n_y=n,
        solve_x=solve_x,
        apply_g=lambda x: x,
        apply_gt=lambda y: y,
        prox=lambda v: soft_threshold(v, beta / mu),
    )


def nnls_problem(c: CsrMatrix, x_hat: np.ndarray, mu: float) -> AdmmProblem:
    """Nonnegative least squares min ||C x - x_hat||^2 over x >= 0.

    Splitting x = y with the indicator of the nonnegative orthant on y;
    the x-update solves (2 C^T C + mu I) x = 2 C^T x_hat + mu v.
    """
    x_hat = np.asarray(x_hat, dtype=float)
    if x_hat.shape != (c.rows,):
        raise ValueError("dimension mismatch between C and x_hat")
    n = c.cols
    c_sp = c.to_scipy()
    h = 2.0 * (c_sp.T @ c_sp).toarray() + mu * np.eye(n)
    cho = scipy.linalg.cho_factor(h)
    ct_xhat = 2.0 * (c_sp.T @ x_hat)

    def solve_x(v: np.ndarray) -> np.ndarray:
        return scipy.linalg.cho_solve(cho, ct_xhat + mu * v)

    return AdmmProblem(
        mu=mu,
        n_x=n,
        n_y=n,
        solve_x=solve_x,
        apply_g=lambda x: x,
        apply_gt=lambda y: y,
        prox=project_nonneg,
    )


def tv_admm_map(x_hat: np.ndarray, beta: float, mu: float) -> FixedPointMap:
    """Fixed-point map of the total-variation sweep on [y, lambda_bar]."""
    return tv_denoise_problem(x_hat, beta, mu).fixed_point_map()


def lasso_admm_map(c: CsrMatrix, x_hat: np.ndarray, beta: float, mu: float) -> FixedPointMap:
    """Fixed-point map of the lasso sweep on [y, lambda_bar]."""
    return lasso_problem(c, x_hat, beta, mu).fixed_point_map()


def nnls_admm_map(c: CsrMatrix, x_hat: np.ndarray, mu: float) -> FixedPointMap:
    """Fixed-point map of the nonnegative least-squares sweep."""
    return nnls_problem(c, x_hat, mu).fixed_point_map()
