"""Linear test systems: a 2-D Poisson discretization and a permutation.

The Poisson problem is the classic smooth benchmark whose Jacobi-scaled
fixed-point map is contractive; the permutation system is its opposite,
an orthogonal matrix on which plain iteration diverges and Krylov
methods shine or stagnate depending on the start.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse

from ..linalg import CsrMatrix


def poisson_exact(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Manufactured solution u(x, y) = cos(pi x / 2) cos(pi y / 2) + 1."""
    return np.cos(np.pi * x / 2.0) * np.cos(np.pi * y / 2.0) + 1.0


def build_poisson_fd(n: int) -> tuple[CsrMatrix, np.ndarray, np.ndarray]:
    """5-point finite-difference Poisson problem on (-1, 1)^2.

    -laplace(u) = (pi^2 / 2) cos(pi x / 2) cos(pi y / 2) with u = 1 on
    the boundary, discretized on an n-by-n interior grid with spacing
    h = 2 / (n + 1). Returns (A, b, u_exact) where A is the stencil
    matrix with diagonal 4 (the h^2 scaling is folded into b) and
    u_exact samples the analytic solution at the interior nodes, which
    the discrete solution approaches at rate O(h^2).
    """
    if n < 1:
        raise ValueError("n must be positive")
    h = 2.0 / (n + 1)
    coords = -1.0 + h * np.arange(1, n + 1)
    xg, yg = np.meshgrid(coords, coords, indexing="xy")
    x_flat = xg.ravel()
    y_flat = yg.ravel()

    main = scipy.sparse.diags([-1.0, 4.0, -1.0], [-1, 0, 1], shape=(n, n))
    off = scipy.sparse.diags([-1.0, -1.0], [-1, 1], shape=(n, n))
    eye = scipy.sparse.identity(n)
    a = scipy.sparse.kron(eye, main) + scipy.sparse.kron(off, eye)

    f = (np.pi**2 / 2.0) * np.cos(np.pi * x_flat / 2.0) * np.cos(np.pi * y_flat / 2.0)
    b = h * h * f
    # boundary value 1 enters the rows next to the boundary
    edge_count = (
        (np.isclose(x_flat, coords[0])).astype(float)
        + (np.isclose(x_flat, coords[-1])).astype(float)
        + (np.isclose(y_flat, coords[0])).astype(float)
        + (np.isclose(y_flat, coords[-1])).astype(float)
    )
    b = b + edge_count
    exact = poisson_exact(x_flat, y_flat)
    return CsrMatrix.from_scipy(a.tocsr()), b, exact


def build_permutation_system(n: int) -> tuple[CsrMatrix, np.ndarray]:
    """Cyclic-shift system A x = e_1 with A e_i = e_(i+1), A e_n = e_1.

    A is orthogonal with eigenvalues on the unit circle, so plain
    Richardson iteration diverges (||I - A|| > 1). The exact solution is
    e_n, and A maps the all-ones vector to itself.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rows = np.arange(n, dtype=np.int64)
    cols = np.concatenate([np.array([n - 1], dtype=np.int64), np.arange(n - 1, dtype=np.int64)])
    vals = np.ones(n)
    a = CsrMatrix.from_coo(n, n, rows, cols, vals)
    b = np.zeros(n)
    b[0] = 1.0
    return a, b
