"""Reproducible benchmark problems for the solvers."""

from .admm import (
    AdmmProblem,
    difference_matrix,
    lasso_admm_map,
    lasso_problem,
    nnls_admm_map,
    nnls_problem,
    project_nonneg,
    soft_threshold,
    tv_admm_map,
    tv_denoise_problem,
)
from .linear import build_permutation_system, build_poisson_fd, poisson_exact
from .logistic import (
    LogisticProblem,
    gd_map,
    logistic_gradient,
    logistic_loss,
    parse_libsvm,
)
from .rng import SeededRng, rng_normal, sparse_random

__all__ = [
    "AdmmProblem",
    "LogisticProblem",
    "SeededRng",
    "build_permutation_system",
    "build_poisson_fd",
    "difference_matrix",
    "gd_map",
    "lasso_admm_map",
    "lasso_problem",
    "logistic_gradient",
    "logistic_loss",
    "nnls_admm_map",
    "nnls_problem",
    "parse_libsvm",
    "poisson_exact",
    "project_nonneg",
    "rng_normal",
    "soft_threshold",
    "sparse_random",
    "tv_admm_map",
    "tv_denoise_problem",
]
