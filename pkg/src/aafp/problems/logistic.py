"""Regularized logistic regression as a gradient-descent fixed point.

The objective over samples (c_i, y_i) with labels y_i in {-1, +1} is
h(x) = (1/n) sum_i log(1 + exp(-y_i x . c_i)) + (reg/2) ||x||^2, and
gradient descent with step eta is the fixed-point map q(x) = x - eta
grad h(x), whose residual vanishes exactly at a minimizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ..fixedpoint import FixedPointMap
from ..linalg import CsrMatrix


@dataclass(frozen=True)
class LogisticProblem:
    """Dataset and regularization for the logistic objective."""

    features: CsrMatrix
    labels: np.ndarray
    reg: float

    def __post_init__(self) -> None:
        if self.labels.shape != (self.features.rows,):
            raise ValueError("one label per feature row required")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if self.reg < 0:
            raise ValueError("reg must be nonnegative")


def logistic_loss(problem: LogisticProblem, x: np.ndarray) -> float:
    """Objective value, overflow-safe for large margins."""
    x = np.asarray(x, dtype=float)
    margins = problem.labels * (problem.features.to_scipy() @ x)
    # log(1 + exp(-m)) = logaddexp(0, -m) never overflows
    data_term = float(np.mean(np.logaddexp(0.0, -margins)))
    return data_term + 0.5 * problem.reg * float(x @ x)


def logistic_gradient(problem: LogisticProblem, x: np.ndarray) -> np.ndarray:
    """Gradient of the objective; sigmoid evaluated in its stable form."""
    x = np.asarray(x, dtype=float)
    a = problem.features.to_scipy()
    margins = problem.labels * (a @ x)
    weights = problem.labels * expit(-margins)
    n = problem.features.rows
    return -(a.T @ weights) / n + problem.reg * x


def gd_map(problem: LogisticProblem, eta: float) -> FixedPointMap:
    """Gradient descent q(x) = x - eta grad h(x) as a fixed-point map."""
    if eta <= 0:
        raise ValueError("eta must be positive")

    def negative_step(x: np.ndarray) -> np.ndarray:
        return -eta * logistic_gradient(problem, x)

    return FixedPointMap(
        dimension=problem.features.cols,
        eval=lambda x: x + negative_step(x),
        residual_fn=negative_step,
    )


def parse_libsvm(path: str, n_features: int | None = None) -> tuple[CsrMatrix, np.ndarray]:
    """Read a sparse 'label index:value ...' dataset.

    Indices are 1-based in the file. Binary labels {1, 2} are mapped to
    {+1, -1}; labels already in {-1, +1} pass through. Malformed lines
    raise ValueError naming the line number.
    """
    labels: list[float] = []
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    max_col = 0
    with open(path, "r", encoding="ascii") as handle:
        for lineno, raw in enumerate(handle, start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            try:
                labels.append(float(parts[0]))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: malformed label '{parts[0]}'") from exc
            row = len(labels) - 1
            for token in parts[1:]:
                idx_str, _, val_str = token.partition(":")
                try:
                    idx = int(idx_str)
                    val = float(val_str)
                except ValueError as exc:
                    raise ValueError(f"line {lineno}: malformed entry '{token}'") from exc
                if idx < 1:
                    raise ValueError(f"line {lineno}: feature index {idx} out of range")
                rows.append(row)
                cols.append(idx - 1)
                vals.append(val)
                max_col = max(max_col, idx)

    label_arr = np.asarray(labels)
    distinct = set(np.unique(label_arr).tolist())
    if distinct <= {-1.0, 1.0}:
        pass
    elif distinct <= {1.0, 2.0}:
        label_arr = np.where(label_arr == 1.0, 1.0, -1.0)
    else:
        raise ValueError(f"expected binary labels, found {sorted(distinct)}")

    n_cols = n_features if n_features is not None else max_col
    if n_features is not None and max_col > n_features:
        raise ValueError(f"feature index {max_col} exceeds n_features={n_features}")
    features = CsrMatrix.from_coo(
        len(labels),
        n_cols,
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals),
    )
    return features, label_arr
