"""Dense matrices over a pluggable scalar, plus the shared kernel routines.

Two carriers coexist and most public functions dispatch on type:

* ``numpy.ndarray`` (float64) for throughput work; and
* ``Matrix``, an immutable row-tuple container holding exact scalars
  (int, Fraction, QuadExt3, or Polynomial) for certification work.

Exact determinants use fraction-free Bareiss elimination; exact inverses are
adjugate/determinant.  Matrices of Polynomial entries (no exact division
available) fall back to cofactor expansion with minor memoization.  Float
inverses use partially pivoted LU with an explicit pivot-magnitude check.
"""

from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .exact import Polynomial

__all__ = [
    "Matrix",
    "DimensionMismatchError",
    "SingularMatrixError",
    "NumericallySingularError",
    "NotPositiveDefiniteError",
    "NotSymmetricError",
    "hadamard",
    "kron",
    "inverse",
    "adjugate_entry",
    "cholesky",
    "is_positive_definite",
    "load_matrix",
    "load_vector",
    "format_matrix",
    "format_vector",
    "SYMMETRY_RTOL",
    "PIVOT_RTOL",
]

# Centralized float tolerance defaults; every call site can override.
SYMMETRY_RTOL = 1e-10
PIVOT_RTOL = 1e-12


class DimensionMismatchError(ValueError):
    pass


class SingularMatrixError(ZeroDivisionError):
    pass


class NumericallySingularError(SingularMatrixError):
    pass


class NotPositiveDefiniteError(ValueError):
    pass


class NotSymmetricError(ValueError):
    pass


class Matrix:
    """Immutable dense matrix over exact scalars (row-major tuples)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(row) for row in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- shape ----------------------------------------------------------------

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]!r})"

    # -- constructors -----------------------------------------------------------

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence, zero=Fraction(0)) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_function(cls, n_rows: int, n_cols: int, fn) -> "Matrix":
        return cls([[fn(i, j) for j in range(n_cols)] for i in range(n_rows)])

    # -- arithmetic --------------------------------------------------------------

    def _same_shape(self, other: "Matrix"):
        if self.n_rows != other.n_rows or self.n_cols != other.n_cols:
            raise DimensionMismatchError(
                f"{self.n_rows}x{self.n_cols} vs {other.n_rows}x{other.n_cols}"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n_cols != other.n_rows:
            raise DimensionMismatchError(
                f"{self.n_rows}x{self.n_cols} @ {other.n_rows}x{other.n_cols}"
            )
        cols = list(zip(*other.rows))
        return Matrix(
            [[_dot(row, col) for col in cols] for row in self.rows]
        )

    def scale(self, factor) -> "Matrix":
        return Matrix([[factor * a for a in row] for row in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def hadamard(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(
            [[a * b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def kron(self, other: "Matrix") -> "Matrix":
        return Matrix(
            [
                [a * b for a in row_a for b in row_b]
                for row_a in self.rows
                for row_b in other.rows
            ]
        )

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.n_rows)
            for j in range(i + 1, self.n_cols)
        )

    # -- reductions ----------------------------------------------------------------

    def row_sums(self) -> tuple:
        return tuple(sum(row) for row in self.rows)

    def col_sums(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.rows))

    def min_entry(self):
        return min(a for row in self.rows for a in row)

    def mat_vec(self, vector: Sequence) -> tuple:
        if len(vector) != self.n_cols:
            raise DimensionMismatchError(f"vector length {len(vector)} vs {self.n_cols} cols")
        return tuple(_dot(row, vector) for row in self.rows)

    def diagonal_entries(self) -> tuple:
        if not self.is_square:
            raise DimensionMismatchError("diagonal of a non-square matrix")
        return tuple(self.rows[i][i] for i in range(self.n_rows))

    def submatrix(self, drop_row: int, drop_col: int) -> "Matrix":
        return Matrix(
            [
                [a for j, a in enumerate(row) if j != drop_col]
                for i, row in enumerate(self.rows)
                if i != drop_row
            ]
        )

    # -- determinant / inverse -------------------------------------------------------

    def det(self):
        if not self.is_square:
            raise DimensionMismatchError("determinant of a non-square matrix")
        if _has_polynomial_entries(self):
            return _det_cofactor_memo(self.rows)
        return _det_bareiss(self.rows)

    def inverse(self) -> "Matrix":
        """Exact inverse as adjugate over determinant."""
        if not self.is_square:
            raise DimensionMismatchError("inverse of a non-square matrix")
        if _has_polynomial_entries(self):
            raise TypeError("exact inverse over polynomial entries is not supported")
        d = self.det()
        if d == 0:
            raise SingularMatrixError("matrix is singular")
        inv_d = Fraction(1) / d
        n = self.n_rows
        if n == 1:
            return Matrix([[inv_d]])
        return Matrix.from_function(
            n, n, lambda i, j: adjugate_entry(self, i + 1, j + 1) * inv_d
        )

    def to_float_array(self) -> np.ndarray:
        return np.array([[float(a) for a in row] for row in self.rows], dtype=float)


def _dot(row, col):
    total = None
    for a, b in zip(row, col):
        product = a * b
        total = product if total is None else total + product
    return total


def _has_polynomial_entries(m: Matrix) -> bool:
    return isinstance(m.rows[0][0], Polynomial)


def _det_bareiss(rows) -> object:
    """Fraction-free Bareiss elimination with row pivoting.

    Exact over integers and rationals: every division is exact (divides by
    the previous pivot, a known minor).
    """
    a = [list(row) for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for swap in range(k + 1, n):
                if a[swap][k] != 0:
                    a[k], a[swap] = a[swap], a[k]
                    sign = -sign
                    break
            else:
                return 0 * prev
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            row_k = a[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                value = pivot * row_i[j] - lead * row_k[j]
                row_i[j] = _exact_div(value, prev)
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1] if n > 1 else a[0][0]


def _exact_div(value, divisor):
    if divisor == 1:
        return value
    if isinstance(value, int) and isinstance(divisor, int):
        q, r = divmod(value, divisor)
        if r:
            raise ArithmeticError("inexact division in Bareiss elimination")
        return q
    return value / divisor


def _det_cofactor_memo(rows) -> object:
    """Determinant by cofactor expansion with memoized minors.

    Used for Polynomial scalars (no exact division).  Expands along the row
    with the fewest nonzero entries inside the current minor; minors are
    memoized on their (rows, cols) index sets, which share heavily across
    the adjugate entries of one matrix.
    """
    n = len(rows)
    memo: dict = {}

    def minor(row_ids: tuple, col_ids: tuple):
        if len(row_ids) == 1:
            return rows[row_ids[0]][col_ids[0]]
        key = (row_ids, col_ids)
        cached = memo.get(key)
        if cached is not None:
            return cached
        # Pick the sparsest row of the current minor.
        best_pos = 0
        best_count = None
        for pos, ri in enumerate(row_ids):
            count = sum(1 for cj in col_ids if _is_nonzero(rows[ri][cj]))
            if best_count is None or count < best_count:
                best_pos, best_count = pos, count
        ri = row_ids[best_pos]
        rest_rows = row_ids[:best_pos] + row_ids[best_pos + 1 :]
        total = None
        for pos, cj in enumerate(col_ids):
            entry = rows[ri][cj]
            if not _is_nonzero(entry):
                continue
            rest_cols = col_ids[:pos] + col_ids[pos + 1 :]
            part = entry * minor(rest_rows, rest_cols)
            if (best_pos + pos) % 2:
                part = -part
            total = part if total is None else total + part
        if total is None:
            total = 0 * rows[row_ids[0]][col_ids[0]]
        memo[key] = total
        return total

    ids = tuple(range(n))
    return minor(ids, ids)


def _is_nonzero(entry) -> bool:
    if isinstance(entry, Polynomial):
        return not entry.is_zero
    return entry != 0


def adjugate_entry(m: Matrix, i: int, j: int):
    """Entry (i, j), 1-based, of the adjugate (transpose of cofactors).

    Equals (-1)^(i+j) times the determinant of ``m`` with row j and column i
    deleted, so that inverse = adjugate / determinant.
    """
    if not m.is_square or m.n_rows < 2:
        raise DimensionMismatchError("adjugate entry needs a square matrix, n >= 2")
    if not (1 <= i <= m.n_rows and 1 <= j <= m.n_cols):
        raise IndexError(f"adjugate index ({i}, {j}) out of range")
    sub = m.submatrix(j - 1, i - 1)
    value = sub.det()
    return -value if (i + j) % 2 else value


# -- dispatching wrappers -----------------------------------------------------


def hadamard(a, b):
    """Entrywise product; operands must have equal dimensions."""
    if isinstance(a, Matrix) and isinstance(b, Matrix):
        return a.hadamard(b)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"{a.shape} vs {b.shape}")
    return a * b


def kron(a, b):
    """Kronecker product; accepts matrices or vectors of either carrier."""
    if isinstance(a, Matrix) and isinstance(b, Matrix):
        return a.kron(b)
    return np.kron(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def inverse(a, pivot_rtol: float = PIVOT_RTOL):
    """Exact adjugate/determinant inverse, or float partially pivoted LU.

    The float path rejects pivots below ``pivot_rtol * max|entry|`` with
    NumericallySingularError; the exact path raises SingularMatrixError when
    the determinant vanishes.
    """
    if isinstance(a, Matrix):
        return a.inverse()
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("inverse of a non-square matrix")
    scale = np.abs(a).max()
    if scale == 0:
        raise NumericallySingularError("zero matrix")
    with warnings.catch_warnings():
        # Exactly singular inputs trip a LinAlgWarning before the pivot
        # check below turns them into an exception.
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < pivot_rtol * scale:
        raise NumericallySingularError(
            f"pivot {pivots.min():.3e} below {pivot_rtol:.0e} * max entry {scale:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0]), check_finite=False)


def _check_symmetry_float(a: np.ndarray, rtol: float):
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.T).max() > rtol * scale:
        raise NotSymmetricError("matrix is not symmetric within tolerance")


def cholesky(a: np.ndarray, symmetry_rtol: float = SYMMETRY_RTOL) -> np.ndarray:
    """Lower-triangular factor with positive diagonal; A must be symmetric PD."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("Cholesky of a non-square matrix")
    _check_symmetry_float(a, symmetry_rtol)
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc


def is_positive_definite(a, symmetry_rtol: float = SYMMETRY_RTOL) -> bool:
    """Sylvester criterion (exact scalars) or Cholesky success (floats)."""
    if isinstance(a, Matrix):
        if not a.is_symmetric():
            raise NotSymmetricError("matrix is not symmetric")
        n = a.n_rows
        for k in range(1, n + 1):
            leading = Matrix([row[:k] for row in a.rows[:k]])
            if not leading.det() > 0:
                return False
        return True
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("PD test on a non-square matrix")
    _check_symmetry_float(a, symmetry_rtol)
    try:
        np.linalg.cholesky(a)
        return True
    except np.linalg.LinAlgError:
        return False


# -- file formats ----------------------------------------------------------------
#
# Matrix files: one row per line, whitespace-separated entries, each entry a
# decimal float or exact rational p/q; '#' comments; blank lines ignored.
# Vector files: one entry per line or a single whitespace-separated line.


def _strip_lines(text: str) -> list[str]:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    return rows


def _parse_entry_exact(token: str) -> Fraction:
    return Fraction(token)


def parse_matrix_text(text: str, exact: bool = False):
    rows = [line.split() for line in _strip_lines(text)]
    if not rows:
        raise ValueError("empty matrix file")
    if exact:
        return Matrix([[_parse_entry_exact(tok) for tok in row] for row in rows])
    try:
        return np.array([[float(Fraction(tok)) for tok in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"bad matrix entry: {exc}") from exc


def parse_vector_text(text: str, exact: bool = False):
    tokens = [tok for line in _strip_lines(text) for tok in line.split()]
    if not tokens:
        raise ValueError("empty vector file")
    if exact:
        return tuple(_parse_entry_exact(tok) for tok in tokens)
    return np.array([float(Fraction(tok)) for tok in tokens], dtype=float)


def load_matrix(path, exact: bool = False):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_matrix_text(handle.read(), exact=exact)


def load_vector(path, exact: bool = False):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_vector_text(handle.read(), exact=exact)


def _format_entry(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def format_matrix(matrix) -> str:
    if isinstance(matrix, Matrix):
        rows = matrix.rows
    else:
        rows = np.asarray(matrix)
    return "\n".join(" ".join(_format_entry(v) for v in row) for row in rows) + "\n"


def format_vector(vector) -> str:
    return " ".join(_format_entry(v) for v in vector) + "\n"
