"""Alternating Anderson/fixed-point iteration.

The driver interleaves plain fixed-point sweeps with Anderson
acceleration steps on a periodic schedule: iteration 1 is always the
plain start x_1 = q(x_0), and for k >= 2 iteration k is a plain step
when mod(k - 1, s + t) < t and an acceleration step otherwise. So each
period of length s + t applies t plain steps followed by s accelerated
ones; t = 0 recovers AA(m) and m = 0 recovers plain iteration. The
window is updated every iteration, including plain ones, so an
acceleration step sees the t preceding fixed-point iterates.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .anderson import (
    DEFAULT_UNBOUNDED_CAP,
    UNBOUNDED,
    AndersonHistory,
    aa_step_gamma,
)
from .fixedpoint import FixedPointMap, IterationTrace, StopRule, _record


@dataclass(frozen=True)
class ScheduleConfig:
    """Parameters of an alternating run.

    m is the acceleration window (0, a positive integer, or UNBOUNDED);
    s >= 1 counts accelerated steps per period and t >= 0 plain steps.
    rank_tol is forwarded to the least-squares solve; unbounded_cap
    bounds the window when m = UNBOUNDED.
    """

    m: int | float
    s: int = 1
    t: int = 0
    rank_tol: float = 1e-14
    unbounded_cap: int = DEFAULT_UNBOUNDED_CAP

    def __post_init__(self) -> None:
        if self.m != UNBOUNDED:
            if not float(self.m).is_integer() or self.m < 0:
                raise ValueError("m must be a nonnegative integer or UNBOUNDED")
        if self.s < 1:
            raise ValueError("s must be at least 1")
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if self.rank_tol < 0:
            raise ValueError("rank_tol must be nonnegative")
        if self.unbounded_cap < 1:
            raise ValueError("unbounded_cap must be positive")


def step_kind(k: int, s: int, t: int) -> str:
    """Kind of iteration k (1-based): "FP" or "AA".

    Iteration 1 is always "FP" regardless of the schedule.
    """
    if k < 1:
        raise ValueError("iteration index must be positive")
    if k == 1:
        return "FP"
    return "FP" if (k - 1) % (s + t) < t else "AA"


def aafp_solve(
    q: FixedPointMap,
    x0: np.ndarray,
    schedule: ScheduleConfig,
    stop: StopRule,
) -> tuple[np.ndarray, IterationTrace]:
    """Run the alternating iteration until the stop rule fires.

    Returns the final iterate and its trace; residual_norms[i] is the
    residual norm at iterate i, so the paper-style per-iterate residual
    sequence can be read off directly. Raises DivergenceError with the
    partial trace if the iteration produces non-finite values.
    """
    x = np.asarray(x0, dtype=float)
    if x.shape != (q.dimension,):
        raise ValueError(f"dimension mismatch: map is on R^{q.dimension}, got shape {x.shape}")
    trace = IterationTrace()
    start = time.perf_counter()
    history = AndersonHistory(window=schedule.m, hard_cap=schedule.unbounded_cap)

    qx = q.eval(x)
    r = qx - x
    _record(trace, r, start)
    r0_norm = trace.residual_norms[0]
    while True:
        trace.converged = stop.satisfied(trace.residual_norms[-1], r0_norm)
        if trace.converged or trace.iterations >= stop.max_iters:
            break
        history.push(qx, r)
        k = trace.iterations + 1
        kind = step_kind(k, schedule.s, schedule.t)
        if kind == "AA" and history.depth == 0:
            kind = "FP"  # m = 0: the accelerated step degenerates to plain
        if kind == "FP":
            x = qx
        else:
            x, _ = aa_step_gamma(history, schedule.rank_tol)
        trace.step_kinds.append(kind)
        trace.iterations += 1
        qx = q.eval(x)
        r = qx - x
        _record(trace, r, start)
    trace.elapsed = time.perf_counter() - start
    return x, trace
