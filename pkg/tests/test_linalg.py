"""Sparse matrix kernels, pivoted least squares, and file round-trips."""

import numpy as np
import pytest
import scipy.linalg

from aafp import (
    CsrMatrix,
    MatrixMarketError,
    jacobi_scale,
    mat_vec,
    norm2,
    qr_least_squares,
    read_matrix_market,
    write_matrix_market,
)
from aafp.problems import SeededRng, build_poisson_fd, sparse_random


def test_norm2_small_vectors():
    assert norm2(np.array([3.0, 4.0])) == 5.0
    assert norm2(np.zeros(7)) == 0.0
    # distance from e_1 to the all-ones vector in R^26
    e1 = np.zeros(26)
    e1[0] = 1.0
    assert norm2(e1 - np.ones(26)) == 5.0


def test_mat_vec_identity():
    eye = CsrMatrix.from_dense(np.eye(3))
    x = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(mat_vec(eye, x), x)


def test_mat_vec_cyclic_shift():
    n = 8
    dense = np.zeros((n, n))
    for i in range(n):
        dense[(i + 1) % n, i] = 1.0
    a = CsrMatrix.from_dense(dense)
    e1 = np.zeros(n)
    e1[0] = 1.0
    out = mat_vec(a, e1)
    expected = np.zeros(n)
    expected[1] = 1.0
    assert np.array_equal(out, expected)


def test_mat_vec_poisson_stencil_rows():
    a, _, _ = build_poisson_fd(3)
    out = mat_vec(a, np.ones(9))
    # center node: 4 - 4 neighbors = 0; corner: 4 - 2 neighbors = 2
    assert out[4] == 0.0
    assert out[0] == 2.0


def test_mat_vec_matches_dense_random():
    rng = SeededRng(101)
    for trial in range(20):
        rows = 3 + trial % 7
        cols = 2 + trial % 5
        a = sparse_random(rng, rows, cols, 0.4)
        x = rng.normal(cols)
        assert np.allclose(mat_vec(a, x), a.to_dense() @ x, atol=1e-13)


def test_mat_vec_dimension_mismatch():
    a = CsrMatrix.from_dense(np.eye(3))
    with pytest.raises(ValueError, match="dimension mismatch"):
        mat_vec(a, np.ones(4))


def test_csr_validation_rejects_bad_structure():
    with pytest.raises(ValueError, match="row_ptr must have"):
        CsrMatrix(2, 2, np.array([0, 1]), np.array([0]), np.array([1.0]))
    with pytest.raises(ValueError, match="column index out of range"):
        CsrMatrix(1, 2, np.array([0, 1]), np.array([5]), np.array([1.0]))
    with pytest.raises(ValueError, match="strictly increasing"):
        CsrMatrix(1, 3, np.array([0, 2]), np.array([1, 1]), np.array([1.0, 2.0]))


def test_csr_from_coo_sums_duplicates():
    a = CsrMatrix.from_coo(
        2,
        2,
        np.array([0, 0, 1]),
        np.array([1, 1, 0]),
        np.array([2.0, 3.0, -1.0]),
    )
    assert np.array_equal(a.to_dense(), np.array([[0.0, 5.0], [-1.0, 0.0]]))


def test_csr_transpose_and_diagonal():
    rng = SeededRng(7)
    a = sparse_random(rng, 6, 4, 0.5)
    assert np.array_equal(a.transpose().to_dense(), a.to_dense().T)
    sq = sparse_random(rng, 5, 5, 0.6)
    assert np.array_equal(sq.diagonal(), np.diag(sq.to_dense()))


def test_csr_scipy_round_trip():
    rng = SeededRng(8)
    a = sparse_random(rng, 9, 5, 0.3)
    back = CsrMatrix.from_scipy(a.to_scipy())
    assert np.array_equal(back.to_dense(), a.to_dense())


def test_qr_matches_normal_equations():
    # well-conditioned tall system: pivoted QR minimizing ||rhs + B c||
    # agrees with the normal equations to solver precision
    rng = SeededRng(21)
    b = rng.normal(100).reshape(20, 5)
    rhs = rng.normal(20)
    sol = qr_least_squares(b, rhs)
    gram = b.T @ b
    reference = -scipy.linalg.cho_solve(scipy.linalg.cho_factor(gram), b.T @ rhs)
    assert sol.numerical_rank == 5
    assert not sol.truncated
    assert np.allclose(sol.coefficients, reference, rtol=1e-10, atol=1e-12)
    assert sol.ls_residual_norm == pytest.approx(norm2(rhs + b @ sol.coefficients), rel=1e-12)


def test_qr_rank_deficient_column():
    b = np.array([[1.0, 1.0], [0.0, 0.0]])
    rhs = np.array([1.0, 0.0])
    sol = qr_least_squares(b, rhs)
    assert sol.numerical_rank == 1
    assert sol.truncated
    # dropped direction gets coefficient zero
    assert np.allclose(np.sort(np.abs(sol.coefficients)), [0.0, 1.0], atol=1e-14)
    assert sol.ls_residual_norm == pytest.approx(0.0, abs=1e-14)


def test_qr_tall_single_column_not_truncated():
    sol = qr_least_squares(np.array([[1.0], [0.0]]), np.array([2.0, 3.0]))
    assert sol.numerical_rank == 1
    assert not sol.truncated
    assert sol.coefficients[0] == pytest.approx(-2.0)
    assert sol.ls_residual_norm == pytest.approx(3.0)


def test_qr_zero_width_and_zero_matrix():
    rhs = np.array([1.0, -2.0])
    empty = qr_least_squares(np.zeros((2, 0)), rhs)
    assert empty.coefficients.size == 0
    assert empty.numerical_rank == 0
    assert empty.ls_residual_norm == pytest.approx(norm2(rhs))

    zero = qr_least_squares(np.zeros((2, 3)), rhs)
    assert zero.numerical_rank == 0
    assert zero.truncated
    assert np.array_equal(zero.coefficients, np.zeros(3))


def test_qr_residual_never_worse_than_trivial():
    # minimizer property: ||rhs + B c|| <= ||rhs|| (c = 0 is feasible),
    # and in the full-rank case the residual is orthogonal to range(B)
    rng = SeededRng(33)
    for trial in range(50):
        rows = 5 + trial % 20
        cols = 1 + trial % min(5, rows)
        b = rng.normal(rows * cols).reshape(rows, cols)
        if trial % 7 == 0 and cols >= 2:
            b[:, -1] = b[:, 0]  # force rank deficiency
        rhs = rng.normal(rows)
        sol = qr_least_squares(b, rhs)
        fit = rhs + b @ sol.coefficients
        assert norm2(fit) <= norm2(rhs) + 1e-12
        if not sol.truncated:
            assert np.max(np.abs(b.T @ fit)) < 1e-8 * max(1.0, norm2(rhs))


def test_jacobi_scale_diagonal_system():
    a = CsrMatrix.from_dense(np.diag([2.0, 4.0]))
    scaled, b = jacobi_scale(a, np.array([2.0, 4.0]))
    assert np.array_equal(scaled.to_dense(), np.eye(2))
    assert np.array_equal(b, np.array([1.0, 1.0]))


def test_jacobi_scale_zero_diagonal_names_row():
    dense = np.eye(4)
    dense[3, 3] = 0.0
    dense[3, 0] = 1.0
    a = CsrMatrix.from_dense(dense)
    with pytest.raises(ValueError, match="row 3"):
        jacobi_scale(a, np.ones(4))


def _write(tmp_path, text):
    path = tmp_path / "matrix.mtx"
    path.write_text(text)
    return str(path)


def test_mm_reads_general_coordinate(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n"
        "% comment line\n"
        "2 3 2\n"
        "1 2 1.5\n"
        "2 1 -2.0\n",
    )
    a = read_matrix_market(path)
    assert np.array_equal(a.to_dense(), np.array([[0.0, 1.5, 0.0], [-2.0, 0.0, 0.0]]))


def test_mm_symmetric_expands_off_diagonal(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 3\n"
        "1 1 4.0\n"
        "2 2 4.0\n"
        "2 1 -1.0\n",
    )
    a = read_matrix_market(path)
    assert np.array_equal(a.to_dense(), np.array([[4.0, -1.0], [-1.0, 4.0]]))


def test_mm_duplicate_entries_are_summed(tmp_path):
    path = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n"
        "1 1 2\n"
        "1 1 2.0\n"
        "1 1 0.5\n",
    )
    a = read_matrix_market(path)
    assert a.to_dense()[0, 0] == 2.5


def test_mm_parse_errors_name_lines(tmp_path):
    bad_header = _write(tmp_path, "%%NotMatrixMarket\n1 1 0\n")
    with pytest.raises(MatrixMarketError, match="line 1"):
        read_matrix_market(bad_header)

    complex_field = _write(
        tmp_path, "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"
    )
    with pytest.raises(MatrixMarketError, match="unsupported field"):
        read_matrix_market(complex_field)

    bad_entry = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n",
    )
    with pytest.raises(MatrixMarketError, match="line 3"):
        read_matrix_market(bad_entry)

    out_of_bounds = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
    )
    with pytest.raises(MatrixMarketError, match="out of bounds"):
        read_matrix_market(out_of_bounds)

    short = _write(
        tmp_path,
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
    )
    with pytest.raises(MatrixMarketError, match="fewer entries"):
        read_matrix_market(short)


def test_mm_write_read_round_trip(tmp_path):
    rng = SeededRng(99)
    a = sparse_random(rng, 12, 7, 0.25)
    path = str(tmp_path / "round.mtx")
    write_matrix_market(path, a)
    back = read_matrix_market(path)
    assert back.rows == a.rows and back.cols == a.cols
    assert np.array_equal(back.to_dense(), a.to_dense())
