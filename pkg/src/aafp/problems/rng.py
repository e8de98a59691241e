"""Deterministic random streams for reproducible problem instances.

SeededRng is a counter-based splitmix64: draw j of a stream seeded with
seed is mix064(seed + (j + 1) * 0x9E3779B97F4A7C15), with the standard
finalizer (xor-shift 30, multiply 0xBF58476D1CE4E5B9, xor-shift 27,
multiply 0x94D049BB133111EB, xor-shift 31). Uniforms take the top 53
bits; normals come from the Box-Muller transform on uniform pairs. The
whole stream is a pure function of the seed, so identical seeds give
identical draws on any platform.
"""

from __future__ import annotations

import numpy as np

from ..linalg import CsrMatrix

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class SeededRng:
    """Deterministic splitmix64 stream with Box-Muller normals."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._counter = 0

    def raw(self, n: int) -> np.ndarray:
        """Next n 64-bit outputs of the stream."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        z = self._seed + idx * _PHI
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def uniform(self, n: int) -> np.ndarray:
        """n uniforms in [0, 1) with 53-bit resolution."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller on consecutive uniform pairs."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        half = (n + 1) // 2
        # shift into (0, 1] so the log is finite
        u1 = (self.raw(half) >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54
        u2 = self.uniform(half)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * half)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:n]


def rng_normal(rng: SeededRng, n: int) -> np.ndarray:
    """Standard normal vector drawn from the stream."""
    return rng.normal(n)


def sparse_random(rng: SeededRng, rows: int, cols: int, density: float) -> CsrMatrix:
    """Sparse matrix with per-entry Bernoulli(density) pattern, normal values.

    The pattern draw scans entries in row-major order, then values are
    drawn for the kept entries in the same order.
    """
    if not (0.0 <= density <= 1.0):
        raise ValueError("density must lie in [0, 1]")
    if rows < 0 or cols < 0:
        raise ValueError("dimensions must be nonnegative")
    mask = rng.uniform(rows * cols) < density
    keep = np.flatnonzero(mask)
    values = rng.normal(keep.size)
    row_idx = keep // cols if cols else np.zeros(0, dtype=np.int64)
    col_idx = keep % cols if cols else np.zeros(0, dtype=np.int64)
    return CsrMatrix.from_coo(rows, cols, row_idx, col_idx, values)
