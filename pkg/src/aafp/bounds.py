"""Convergence bound calculators for the alternating iteration.

For a linear fixed-point map with symmetric iteration matrix whose
spectrum lies in [a, b] with 0, 1 outside the interval, the one-step
acceleration gain is governed by Chebyshev polynomials evaluated just
outside [-1, 1]. This module evaluates those quantities and reproduces
the reference table of gain factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_TABLE_INTERVALS = [(0.3, 0.9), (1.5, 3.0), (2.0, 5.0), (10.0, 30.0), (20.0, 50.0)]
_TABLE_WINDOWS = [2, 4, 10, 15]


def chebyshev_t(k: int, x: float) -> float:
    """Chebyshev polynomial of the first kind T_k(x).

    Uses the three-term recurrence on [-1, 1] and the closed form
    ((x + sqrt(x^2 - 1))^k + (x + sqrt(x^2 - 1))^-k) / 2 outside, which
    stays finite for the large arguments the bounds produce.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if abs(x) <= 1.0:
        t_prev, t_cur = 1.0, x
        if k == 0:
            return t_prev
        for _ in range(k - 1):
            t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
        return t_cur
    sign = 1.0 if (x > 0 or k % 2 == 0) else -1.0
    ax = abs(x)
    y = ax + math.sqrt(ax * ax - 1.0)
    return sign * 0.5 * (y**k + y**-k)


def _check_interval(a: float, b: float) -> None:
    if not (a < b):
        raise ValueError("interval requires a < b")
    if not (0.0 < a < b < 1.0 or 1.0 < a):
        raise ValueError("interval must satisfy 0 < a < b < 1 or 1 < a < b")


def bound_c(a: float, b: float, m: int) -> float:
    """One-step acceleration gain C(a, b, m) = 1 / |T_m((2ab - a - b) / (b - a))|."""
    _check_interval(a, b)
    if m < 0:
        raise ValueError("m must be nonnegative")
    arg = (2.0 * a * b - a - b) / (b - a)
    return 1.0 / abs(chebyshev_t(m, arg))


def bound_eps(a: float, b: float, k: int) -> float:
    """Closed-form over-estimate of C(a, b, k); always >= C(a, b, k).

    For 0 < a < b < 1 the contraction ratio uses b(1 - a) / (a(1 - b));
    for 1 < a < b it uses a(1 - b) / (b(1 - a)).
    """
    _check_interval(a, b)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if b < 1.0:
        ratio = b * (1.0 - a) / (a * (1.0 - b))
    else:
        ratio = a * (1.0 - b) / (b * (1.0 - a))
    root = math.sqrt(ratio)
    return 2.0 * ((root - 1.0) / (root + 1.0)) ** k


def sufficient_condition(
    a: float, b: float, m: int, t: int, kappa: float = 1.0
) -> tuple[float, bool]:
    """Convergence test for the subsequence at period boundaries, s = 1.

    For a divergent map with spectrum in [a, b], 1 < a < b, returns
    (value, value < 1) where
    value = 2 kappa ((sqrt(a(1-b)/(b(1-a))) - 1) / (sqrt(..) + 1))^m b^(t+1).
    The subsequence contracts when the value is below one.
    """
    if not (1.0 < a < b):
        raise ValueError("sufficient condition requires 1 < a < b")
    if m < 0 or t < 0:
        raise ValueError("m and t must be nonnegative")
    if kappa < 1.0:
        raise ValueError("kappa is a condition number and must be >= 1")
    ratio = a * (1.0 - b) / (b * (1.0 - a))
    root = math.sqrt(ratio)
    value = 2.0 * kappa * ((root - 1.0) / (root + 1.0)) ** m * b ** (t + 1)
    return value, value < 1.0


def _round4(x: float) -> float:
    """Round to 4 decimals, halves away from zero."""
    return math.floor(x * 10_000 + 0.5) / 10_000 if x >= 0 else -math.floor(-x * 10_000 + 0.5) / 10_000


@dataclass(frozen=True)
class BoundTableCell:
    interval: tuple[float, float]
    m: int
    c_scaled: float  # C(a, b, m) * b^(m+1)
    eps_scaled: float  # eps(a, b, m) * b^(m+1)

    def formatted(self) -> str:
        """Paper-style cell: 'C(eps)' to 4 decimals, or '-' when above one."""
        if self.c_scaled > 1.0:
            return "-"
        return f"{_round4(self.c_scaled):.4f}({_round4(self.eps_scaled):.4f})"


def bound_table() -> list[list[BoundTableCell]]:
    """Gain factors C b^(m+1) and eps b^(m+1) on the reference intervals.

    Rows are the intervals (0.3, 0.9), (1.5, 3), (2, 5), (10, 30),
    (20, 50); columns are m = 2, 4, 10, 15 with t = m. The scaled gain
    bounds the per-period residual ratio of the alternating iteration.
    """
    rows = []
    for a, b in _TABLE_INTERVALS:
        row = []
        for m in _TABLE_WINDOWS:
            scale = b ** (m + 1)
            row.append(
                BoundTableCell(
                    interval=(a, b),
                    m=m,
                    c_scaled=bound_c(a, b, m) * scale,
                    eps_scaled=bound_eps(a, b, m) * scale,
                )
            )
        rows.append(row)
    return rows


def bound_table_text() -> str:
    """The bound table as aligned text."""
    rows = bound_table()
    header = ["interval"] + [f"m={m}" for m in _TABLE_WINDOWS]
    body = []
    for (a, b), row in zip(_TABLE_INTERVALS, rows):
        ivl = f"({a:g}, {b:g})"
        body.append([ivl] + [cell.formatted() for cell in row])
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    lines = []
    for line in [header] + body:
        lines.append("  ".join(field.ljust(width) for field, width in zip(line, widths)))
    return "\n".join(lines)
