"""Unrestarted GMRES for square linear systems A x = b.

Arnoldi with modified Gram-Schmidt builds the Krylov basis and Givens
rotations keep the small problem triangular, so the residual norm at
every iteration comes out of the rotated right-hand side for free. An
exactly invariant Krylov subspace (happy breakdown) means the iterate
solves the system and the run stops there.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .fixedpoint import StopRule
from .linalg import CsrMatrix, mat_vec, norm2


@dataclass
class GmresResult:
    """Outcome of a GMRES run.

    residual_norms[k] is ||b - A x_k|| (from the rotated right-hand
    side), starting at k = 0; it is nonincreasing. step_elapsed holds
    the cumulative wall-clock seconds at which each residual was
    recorded. iterates holds x_0..x_iterations when requested, else
    None.
    """

    solution: np.ndarray
    residual_norms: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    elapsed: float = 0.0
    step_elapsed: list[float] = field(default_factory=list)
    iterates: list[np.ndarray] | None = None


def gmres_solve(
    a: CsrMatrix,
    b: np.ndarray,
    x0: np.ndarray,
    stop: StopRule,
    keep_iterates: bool = False,
) -> GmresResult:
    """Run GMRES from x0 until the stop rule fires.

    The Krylov dimension is capped at n, where the method is exact in
    exact arithmetic. keep_iterates reconstructs and stores the iterate
    at every step (costing one small triangular solve per iteration).
    """
    if a.rows != a.cols:
        raise ValueError("gmres_solve requires a square matrix")
    n = a.rows
    b = np.asarray(b, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if b.shape != (n,) or x0.shape != (n,):
        raise ValueError("dimension mismatch between matrix and vectors")

    start = time.perf_counter()
    r0 = b - mat_vec(a, x0)
    beta = norm2(r0)
    result = GmresResult(solution=x0.copy(), residual_norms=[beta])
    result.step_elapsed.append(time.perf_counter() - start)
    if keep_iterates:
        result.iterates = [x0.copy()]
    if stop.satisfied(beta, beta) or stop.max_iters == 0 or beta == 0.0:
        result.converged = stop.satisfied(beta, beta)
        result.elapsed = time.perf_counter() - start
        return result

    max_k = min(stop.max_iters, n)
    basis = [r0 / beta]
    h_cols: list[np.ndarray] = []  # rotated columns of the Hessenberg matrix
    cos: list[float] = []
    sin: list[float] = []
    g = [beta]

    def current_solution(k: int) -> np.ndarray:
        r_small = np.zeros((k, k))
        for j in range(k):
            r_small[: j + 1, j] = h_cols[j][: j + 1]
        y = scipy.linalg.solve_triangular(r_small, np.asarray(g[:k]))
        return x0 + np.column_stack(basis[:k]) @ y

    for k in range(1, max_k + 1):
        w = mat_vec(a, basis[-1])
        scale = norm2(w)
        h = np.zeros(k + 1)
        for i in range(k):
            h[i] = float(basis[i] @ w)
            w = w - h[i] * basis[i]
        h_next = norm2(w)
        h[k] = h_next
        happy = h_next <= 1e-14 * max(scale, 1e-300)

        # apply the accumulated rotations, then one new rotation
        for i in range(k - 1):
            hi, hi1 = h[i], h[i + 1]
            h[i] = cos[i] * hi + sin[i] * hi1
            h[i + 1] = -sin[i] * hi + cos[i] * hi1
        denom = float(np.hypot(h[k - 1], h[k]))
        if denom == 0.0:
            c, s = 1.0, 0.0
        else:
            c, s = h[k - 1] / denom, h[k] / denom
        cos.append(c)
        sin.append(s)
        h[k - 1] = denom
        h[k] = 0.0
        g.append(-s * g[k - 1])
        g[k - 1] = c * g[k - 1]
        h_cols.append(h[:k].copy())

        result.residual_norms.append(abs(g[k]))
        result.step_elapsed.append(time.perf_counter() - start)
        result.iterations = k
        if keep_iterates:
            result.iterates.append(current_solution(k))
        if stop.satisfied(abs(g[k]), beta) or happy or k == max_k:
            result.solution = current_solution(k)
            result.converged = stop.satisfied(abs(g[k]), beta)
            break
        basis.append(w / h_next)

    result.elapsed = time.perf_counter() - start
    return result
