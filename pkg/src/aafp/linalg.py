"""Dense and sparse linear algebra helpers shared by the solvers.

Vectors and dense matrices are plain numpy arrays (1-D and 2-D float64).
Sparse matrices use a small CSR container so problem builders can stay
explicit about storage; matrix-vector products go through scipy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse


class MatrixMarketError(ValueError):
    """Raised when a Matrix Market file cannot be parsed.

    The message always names the 1-based line number at fault.
    """


@dataclass(frozen=True)
class CsrMatrix:
    """Square or rectangular sparse matrix in compressed-sparse-row form.

    row_ptr has rows+1 entries; col_idx and values have nnz entries and
    within each row the column indices are strictly increasing.
    """

    rows: int
    cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    _scipy_cache: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if self.row_ptr.shape != (self.rows + 1,):
            raise ValueError("row_ptr must have rows + 1 entries")
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != self.values.size:
            raise ValueError("row_ptr must start at 0 and end at nnz")
        if np.any(np.diff(self.row_ptr) < 0):
            raise ValueError("row_ptr must be nondecreasing")
        if self.col_idx.shape != self.values.shape:
            raise ValueError("col_idx and values must have the same length")
        if self.col_idx.size and (
            self.col_idx.min() < 0 or self.col_idx.max() >= self.cols
        ):
            raise ValueError("column index out of range")
        for i in range(self.rows):
            lo, hi = self.row_ptr[i], self.row_ptr[i + 1]
            if np.any(np.diff(self.col_idx[lo:hi]) <= 0):
                raise ValueError(f"column indices not strictly increasing in row {i}")

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @staticmethod
    def from_coo(
        rows: int,
        cols: int,
        row_indices: np.ndarray,
        col_indices: np.ndarray,
        values: np.ndarray,
    ) -> "CsrMatrix":
        """Build from coordinate triplets; duplicate entries are summed."""
        coo = scipy.sparse.coo_matrix(
            (np.asarray(values, dtype=float), (row_indices, col_indices)),
            shape=(rows, cols),
        )
        return CsrMatrix.from_scipy(coo.tocsr())

    @staticmethod
    def from_dense(dense: np.ndarray) -> "CsrMatrix":
        return CsrMatrix.from_scipy(scipy.sparse.csr_matrix(np.asarray(dense, dtype=float)))

    @staticmethod
    def from_scipy(mat: scipy.sparse.spmatrix) -> "CsrMatrix":
        csr = scipy.sparse.csr_matrix(mat)
        csr.sum_duplicates()
        csr.sort_indices()
        csr.eliminate_zeros()
        return CsrMatrix(
            rows=csr.shape[0],
            cols=csr.shape[1],
            row_ptr=csr.indptr.astype(np.int64),
            col_idx=csr.indices.astype(np.int64),
            values=csr.data.astype(float),
        )

    def to_scipy(self) -> scipy.sparse.csr_matrix:
        # cache: the wrapped arrays are immutable by convention
        if not self._scipy_cache:
            self._scipy_cache.append(
                scipy.sparse.csr_matrix(
                    (self.values, self.col_idx, self.row_ptr), shape=(self.rows, self.cols)
                )
            )
        return self._scipy_cache[0]

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def transpose(self) -> "CsrMatrix":
        return CsrMatrix.from_scipy(self.to_scipy().T)

    def diagonal(self) -> np.ndarray:
        return self.to_scipy().diagonal()


def norm2(x: np.ndarray) -> float:
    """Euclidean norm of a vector, safe against overflow in the squares."""
    x = np.asarray(x)
    value = float(np.linalg.norm(x))
    if np.isinf(value) and x.size and np.all(np.isfinite(x)):
        peak = float(np.max(np.abs(x)))
        return peak * float(np.linalg.norm(x / peak))
    return value


def mat_vec(a: CsrMatrix, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product A @ x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.cols,):
        raise ValueError(f"dimension mismatch: matrix has {a.cols} columns, vector has {x.shape}")
    return a.to_scipy() @ x


def jacobi_scale(a: CsrMatrix, b: np.ndarray) -> tuple[CsrMatrix, np.ndarray]:
    """Return (D^-1 A, D^-1 b) where D is the diagonal of A.

    Raises ValueError naming the first offending row if a diagonal entry
    is zero.
    """
    if a.rows != a.cols:
        raise ValueError("jacobi_scale requires a square matrix")
    b = np.asarray(b, dtype=float)
    if b.shape != (a.rows,):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    diag = a.diagonal()
    zero_rows = np.flatnonzero(diag == 0.0)
    if zero_rows.size:
        raise ValueError(f"zero diagonal entry in row {int(zero_rows[0])}")
    inv = 1.0 / diag
    scaled = scipy.sparse.diags(inv) @ a.to_scipy()
    return CsrMatrix.from_scipy(scaled), inv * b


@dataclass(frozen=True)
class LeastSquaresSolution:
    """Result of a rank-aware least-squares solve.

    coefficients: the minimizer, with truncated entries set to zero.
    numerical_rank: count of pivot columns kept at the rank tolerance.
    ls_residual_norm: Euclidean norm of rhs + B @ coefficients.
    truncated: numerical_rank < column count (solution not unique).
    """

    coefficients: np.ndarray
    numerical_rank: int
    ls_residual_norm: float
    truncated: bool


def qr_least_squares(
    b_mat: np.ndarray, rhs: np.ndarray, rank_tol: float = 1e-14
) -> LeastSquaresSolution:
    """Minimize ||rhs + B gamma||_2 by Householder QR with column pivoting.

    Diagonal entries of R below rank_tol * |R[0, 0]| mark the numerical
    rank; coefficients for the dropped pivot columns are zero and the
    solution is flagged truncated. A matrix with zero columns yields an
    empty coefficient vector.
    """
    b_mat = np.asarray(b_mat, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if b_mat.ndim != 2:
        raise ValueError("B must be a 2-D array")
    if rhs.shape != (b_mat.shape[0],):
        raise ValueError("dimension mismatch between B and rhs")
    if rank_tol < 0:
        raise ValueError("rank_tol must be nonnegative")
    n_cols = b_mat.shape[1]
    if n_cols == 0:
        return LeastSquaresSolution(np.zeros(0), 0, norm2(rhs), False)

    q, r, piv = scipy.linalg.qr(b_mat, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(diag > rank_tol * diag[0]))
        # pivoting makes |R_ii| nonincreasing, so this prefix is contiguous
    coeffs = np.zeros(n_cols)
    if rank > 0:
        z = scipy.linalg.solve_triangular(r[:rank, :rank], -(q.T @ rhs)[:rank])
        coeffs[piv[:rank]] = z
    residual = norm2(rhs + b_mat @ coeffs)
    return LeastSquaresSolution(coeffs, rank, residual, rank < n_cols)


def _parse_mm_header(line: str) -> tuple[str, bool]:
    tokens = line.strip().lower().split()
    if len(tokens) != 5 or tokens[0] != "%%matrixmarket":
        raise MatrixMarketError("line 1: malformed Matrix Market header")
    banner, obj, fmt, fld, sym = tokens
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError("line 1: only coordinate matrices are supported")
    if fld != "real":
        raise MatrixMarketError(f"line 1: unsupported field '{fld}' (only real)")
    if sym == "general":
        return fld, False
    if sym == "symmetric":
        return fld, True
    raise MatrixMarketError(f"line 1: unsupported symmetry '{sym}'")


def read_matrix_market(path: str) -> CsrMatrix:
    """Read a real coordinate Matrix Market file.

    Supports general and symmetric storage; symmetric files are expanded
    so the returned matrix holds both triangles. Duplicate coordinate
    entries are summed. Parse failures raise MatrixMarketError naming the
    offending line.
    """
    with open(path, "r", encoding="ascii") as handle:
        lines = handle.readlines()
    if not lines:
        raise MatrixMarketError("line 1: empty file")
    _, symmetric = _parse_mm_header(lines[0])

    size_line = None
    size_lineno = 0
    body_start = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        size_line = stripped
        size_lineno = lineno
        body_start = lineno
        break
    if size_line is None:
        raise MatrixMarketError(f"line {len(lines)}: missing size line")
    parts = size_line.split()
    if len(parts) != 3:
        raise MatrixMarketError(f"line {size_lineno}: size line must have 3 integers")
    try:
        rows, cols, nnz = (int(p) for p in parts)
    except ValueError as exc:
        raise MatrixMarketError(f"line {size_lineno}: size line must have 3 integers") from exc
    if rows < 0 or cols < 0 or nnz < 0:
        raise MatrixMarketError(f"line {size_lineno}: negative size")

    ri: list[int] = []
    ci: list[int] = []
    vals: list[float] = []
    seen = 0
    for lineno, raw in enumerate(lines[body_start:], start=body_start + 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise MatrixMarketError(f"line {lineno}: expected 'row col value'")
        try:
            i = int(parts[0])
            j = int(parts[1])
            v = float(parts[2])
        except ValueError as exc:
            raise MatrixMarketError(f"line {lineno}: malformed entry") from exc
        if not (1 <= i <= rows) or not (1 <= j <= cols):
            raise MatrixMarketError(f"line {lineno}: index ({i}, {j}) out of bounds")
        seen += 1
        if seen > nnz:
            raise MatrixMarketError(f"line {lineno}: more entries than declared")
        ri.append(i - 1)
        ci.append(j - 1)
        vals.append(v)
        if symmetric and i != j:
            ri.append(j - 1)
            ci.append(i - 1)
            vals.append(v)
    if seen < nnz:
        raise MatrixMarketError(f"line {len(lines)}: fewer entries than declared")
    return CsrMatrix.from_coo(
        rows, cols, np.asarray(ri, dtype=np.int64), np.asarray(ci, dtype=np.int64), np.asarray(vals)
    )


def write_matrix_market(path: str, a: CsrMatrix) -> None:
    """Write a CSR matrix as general real coordinate Matrix Market.

    Values are written with enough digits to round-trip exactly.
    """
    with open(path, "w", encoding="ascii") as handle:
        handle.write("%%MatrixMarket matrix coordinate real general\n")
        handle.write(f"{a.rows} {a.cols} {a.nnz}\n")
        for i in range(a.rows):
            lo, hi = a.row_ptr[i], a.row_ptr[i + 1]
            for k in range(lo, hi):
                handle.write(f"{i + 1} {a.col_idx[k] + 1} {float(a.values[k])!r}\n")
