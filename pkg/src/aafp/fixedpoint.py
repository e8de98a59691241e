"""Fixed-point maps, stop rules, iteration traces, and the plain driver.

A fixed-point problem is x = q(x). The residual at x is r(x) = q(x) - x
and every solver in this package records the Euclidean residual norm at
each iterate, starting with the initial guess.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import CsrMatrix, mat_vec, norm2


class DivergenceError(RuntimeError):
    """Raised when an iteration produces non-finite values.

    The partial trace accumulated so far is attached as .trace.
    """

    def __init__(self, message: str, trace: "IterationTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class FixedPointMap:
    """A fixed-point map q on R^dimension.

    eval applies the map. residual_fn, when set, computes q(x) - x with
    the map's natural residual expression (for linear maps this keeps
    the residual bit-identical to b - A x).
    """

    dimension: int
    eval: Callable[[np.ndarray], np.ndarray]
    residual_fn: Callable[[np.ndarray], np.ndarray] | None = None


def residual(q: FixedPointMap, x: np.ndarray) -> np.ndarray:
    """Residual r(x) = q(x) - x, using the map's own expression if it has one."""
    x = np.asarray(x, dtype=float)
    if x.shape != (q.dimension,):
        raise ValueError(f"dimension mismatch: map is on R^{q.dimension}, got shape {x.shape}")
    if q.residual_fn is not None:
        return q.residual_fn(x)
    return q.eval(x) - x


@dataclass(frozen=True)
class StopRule:
    """Stop when ||r_k|| <= max(rel_tol * ||r_0||, abs_tol), or at max_iters."""

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_iters: int = 1000

    def __post_init__(self) -> None:
        if self.rel_tol < 0 or self.abs_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.rel_tol == 0 and self.abs_tol == 0:
            raise ValueError("at least one of rel_tol, abs_tol must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")

    def satisfied(self, r_norm: float, r0_norm: float) -> bool:
        return r_norm <= max(self.rel_tol * r0_norm, self.abs_tol)


@dataclass
class IterationTrace:
    """Per-iteration record of a fixed-point style solve.

    residual_norms[i] is ||r(x_i)|| for i = 0..iterations, so it has
    iterations + 1 entries and the last one is the residual at the
    returned iterate. step_kinds[i] says how x_{i+1} was produced
    ("FP" or "AA") and has iterations entries. step_elapsed holds the
    cumulative wall-clock seconds at which each residual was recorded.
    """

    residual_norms: list[float] = field(default_factory=list)
    step_kinds: list[str] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    elapsed: float = 0.0
    step_elapsed: list[float] = field(default_factory=list)


def fp_solve(
    q: FixedPointMap, x0: np.ndarray, stop: StopRule
) -> tuple[np.ndarray, IterationTrace]:
    """Plain fixed-point iteration x_{k+1} = q(x_k)."""
    x = np.asarray(x0, dtype=float)
    if x.shape != (q.dimension,):
        raise ValueError(f"dimension mismatch: map is on R^{q.dimension}, got shape {x.shape}")
    trace = IterationTrace()
    start = time.perf_counter()

    qx = q.eval(x)
    r = qx - x
    _record(trace, r, start)
    r0_norm = trace.residual_norms[0]
    while True:
        trace.converged = stop.satisfied(trace.residual_norms[-1], r0_norm)
        if trace.converged or trace.iterations >= stop.max_iters:
            break
        x = qx
        trace.step_kinds.append("FP")
        trace.iterations += 1
        qx = q.eval(x)
        r = qx - x
        _record(trace, r, start)
    trace.elapsed = time.perf_counter() - start
    return x, trace


def _record(trace: IterationTrace, r: np.ndarray, start: float) -> None:
    if not np.all(np.isfinite(r)):
        trace.elapsed = time.perf_counter() - start
        raise DivergenceError(
            f"non-finite residual at iteration {trace.iterations}", trace
        )
    trace.residual_norms.append(norm2(r))
    trace.step_elapsed.append(time.perf_counter() - start)


def richardson_map(a: CsrMatrix, b: np.ndarray) -> FixedPointMap:
    """Richardson iteration map q(x) = x + (b - A x) for A x = b.

    The residual of this map is exactly the linear residual b - A x.
    """
    b = np.asarray(b, dtype=float)
    if a.rows != a.cols:
        raise ValueError("richardson_map requires a square matrix")
    if b.shape != (a.rows,):
        raise ValueError("dimension mismatch between matrix and right-hand side")

    def linres(x: np.ndarray) -> np.ndarray:
        return b - mat_vec(a, x)

    return FixedPointMap(
        dimension=a.rows,
        eval=lambda x: x + linres(x),
        residual_fn=linres,
    )


def jacobi_map(a: CsrMatrix, b: np.ndarray) -> FixedPointMap:
    """Jacobi iteration map q(x) = x + D^-1 (b - A x) for A x = b.

    Equivalent to Richardson on the Jacobi-scaled system; raises if any
    diagonal entry of A is zero.
    """
    if a.rows != a.cols:
        raise ValueError("jacobi_map requires a square matrix")
    b = np.asarray(b, dtype=float)
    if b.shape != (a.rows,):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    diag = a.diagonal()
    zero_rows = np.flatnonzero(diag == 0.0)
    if zero_rows.size:
        raise ValueError(f"zero diagonal entry in row {int(zero_rows[0])}")
    inv = 1.0 / diag

    def scaledres(x: np.ndarray) -> np.ndarray:
        return inv * (b - mat_vec(a, x))

    return FixedPointMap(
        dimension=a.rows,
        eval=lambda x: x + scaledres(x),
        residual_fn=scaledres,
    )
