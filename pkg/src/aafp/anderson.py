"""Anderson acceleration: the sliding window and the two step forms.

The window stores (q(x), r(x)) pairs for the most recent iterates,
newest first. An acceleration step combines the stored map values so
that the combined residual has minimal Euclidean norm; the gamma form
uses differences against the newest residual, the tau form uses
consecutive differences. Both span the same space and produce the same
iterate in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fixedpoint import FixedPointMap, IterationTrace, StopRule
from .linalg import norm2, qr_least_squares

UNBOUNDED = math.inf

DEFAULT_UNBOUNDED_CAP = 500


class WindowCapError(RuntimeError):
    """An unbounded window grew past its configured hard cap."""


@dataclass
class AndersonHistory:
    """Sliding window of (map value, residual) pairs, newest first.

    window is the maximum number of difference columns m, so at most
    window + 1 pairs are retained. window may be UNBOUNDED, in which
    case exceeding hard_cap columns raises WindowCapError instead of
    silently restarting.
    """

    window: int | float
    hard_cap: int = DEFAULT_UNBOUNDED_CAP
    q_values: list[np.ndarray] = field(default_factory=list)
    residuals: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.window is not UNBOUNDED and self.window != UNBOUNDED:
            if self.window != int(self.window) or self.window < 0:
                raise ValueError("window must be a nonnegative integer or UNBOUNDED")
        if self.hard_cap < 1:
            raise ValueError("hard_cap must be positive")

    @property
    def depth(self) -> int:
        """Number of difference columns available."""
        return max(len(self.residuals) - 1, 0)

    def push(self, q_value: np.ndarray, res: np.ndarray) -> None:
        self.q_values.insert(0, np.asarray(q_value, dtype=float))
        self.residuals.insert(0, np.asarray(res, dtype=float))
        if self.window == UNBOUNDED:
            if len(self.residuals) - 1 > self.hard_cap:
                raise WindowCapError(
                    f"unbounded window exceeded hard cap of {self.hard_cap} columns"
                )
        else:
            keep = int(self.window) + 1
            del self.q_values[keep:]
            del self.residuals[keep:]


@dataclass(frozen=True)
class AaStepReport:
    """Diagnostics of one acceleration step.

    coefficients holds gamma (or tau) with truncated entries zero,
    ls_residual_norm is the minimized combined residual norm, and
    truncated reports whether rank truncation dropped columns.
    """

    coefficients: np.ndarray
    ls_residual_norm: float
    truncated: bool


def aa_step_gamma(
    history: AndersonHistory, rank_tol: float = 1e-14
) -> tuple[np.ndarray, AaStepReport]:
    """Acceleration step in the gamma form.

    With newest pair (q_new, r_new) and m earlier pairs, solves
    min_gamma || r_new + B gamma || where column i of B is
    r_new - r_(i back), and returns q_new + C gamma with C built the
    same way from map values.
    """
    if not history.residuals:
        raise ValueError("empty history")
    r_new = history.residuals[0]
    q_new = history.q_values[0]
    m = history.depth
    if m == 0:
        return q_new.copy(), AaStepReport(np.zeros(0), norm2(r_new), False)
    b_mat = r_new[:, None] - np.column_stack(history.residuals[1:])
    c_mat = q_new[:, None] - np.column_stack(history.q_values[1:])
    sol = qr_least_squares(b_mat, r_new, rank_tol)
    x_next = q_new + c_mat @ sol.coefficients
    return x_next, AaStepReport(sol.coefficients, sol.ls_residual_norm, sol.truncated)


def aa_step_tau(
    history: AndersonHistory, rank_tol: float = 1e-14
) -> tuple[np.ndarray, AaStepReport]:
    """Acceleration step in the tau form (consecutive differences).

    Column i of the least-squares matrix is the difference of the
    (i-1)th and ith newest residuals. Equivalent to the gamma form:
    tau_j equals the tail sum of gamma_j..gamma_m.
    """
    if not history.residuals:
        raise ValueError("empty history")
    r_new = history.residuals[0]
    q_new = history.q_values[0]
    m = history.depth
    if m == 0:
        return q_new.copy(), AaStepReport(np.zeros(0), norm2(r_new), False)
    r_cols = np.column_stack(history.residuals)
    q_cols = np.column_stack(history.q_values)
    d_mat = r_cols[:, :-1] - r_cols[:, 1:]
    e_mat = q_cols[:, :-1] - q_cols[:, 1:]
    sol = qr_least_squares(d_mat, r_new, rank_tol)
    x_next = q_new + e_mat @ sol.coefficients
    return x_next, AaStepReport(sol.coefficients, sol.ls_residual_norm, sol.truncated)


def aa_solve(
    q: FixedPointMap,
    x0: np.ndarray,
    m: int | float,
    stop: StopRule,
    rank_tol: float = 1e-14,
    unbounded_cap: int = DEFAULT_UNBOUNDED_CAP,
) -> tuple[np.ndarray, IterationTrace]:
    """Anderson-accelerated fixed-point iteration AA(m).

    Iteration 1 is the plain start x_1 = q(x_0); every later iterate is
    an acceleration step over the last min(k - 1, m) differences. m = 0
    reduces exactly to fp_solve; m = UNBOUNDED keeps the whole history.
    """
    from .alternating import ScheduleConfig, aafp_solve

    schedule = ScheduleConfig(m=m, s=1, t=0, rank_tol=rank_tol, unbounded_cap=unbounded_cap)
    return aafp_solve(q, x0, schedule, stop)
