"""Alternating Anderson/fixed-point acceleration toolkit.

Solvers for fixed-point problems x = q(x): plain iteration, Anderson
acceleration AA(m), the alternating variant that interleaves t plain
steps with s accelerated steps per period, and unrestarted GMRES as the
Krylov baseline for linear maps. Chebyshev-based bound calculators and
a reproducible benchmark problem suite round out the package.
"""

from .alternating import ScheduleConfig, aafp_solve, step_kind
from .anderson import (
    UNBOUNDED,
    AaStepReport,
    AndersonHistory,
    WindowCapError,
    aa_solve,
    aa_step_gamma,
    aa_step_tau,
)
from .bounds import bound_c, bound_eps, bound_table, bound_table_text, chebyshev_t, sufficient_condition
from .fixedpoint import (
    DivergenceError,
    FixedPointMap,
    IterationTrace,
    StopRule,
    fp_solve,
    jacobi_map,
    residual,
    richardson_map,
)
from .gmres import GmresResult, gmres_solve
from .linalg import (
    CsrMatrix,
    LeastSquaresSolution,
    MatrixMarketError,
    jacobi_scale,
    mat_vec,
    norm2,
    qr_least_squares,
    read_matrix_market,
    write_matrix_market,
)

__version__ = "0.1.0"

__all__ = [
    "AaStepReport",
    "AndersonHistory",
    "CsrMatrix",
    "DivergenceError",
    "FixedPointMap",
    "GmresResult",
    "IterationTrace",
    "LeastSquaresSolution",
    "MatrixMarketError",
    "ScheduleConfig",
    "StopRule",
    "UNBOUNDED",
    "WindowCapError",
    "aa_solve",
    "aa_step_gamma",
    "aa_step_tau",
    "aafp_solve",
    "bound_c",
    "bound_eps",
    "bound_table",
    "bound_table_text",
    "chebyshev_t",
    "fp_solve",
    "gmres_solve",
    "jacobi_map",
    "jacobi_scale",
    "mat_vec",
    "norm2",
    "qr_least_squares",
    "read_matrix_market",
    "residual",
    "richardson_map",
    "step_kind",
    "write_matrix_market",
]
