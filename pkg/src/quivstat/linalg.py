"""Exact matrix algebra over Q and F_p.

Matrices are immutable wrappers around numpy arrays (int64 residues for F_p,
Fraction objects for Q).  Elimination pivots on the first nonzero entry in
column order, so every derived basis (kernel, image, solutions) is
deterministic and golden tests are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .fields import Field, PrimeField, Rationals


@dataclass(frozen=True, eq=False)
class Matrix:
    field: Field
    data: np.ndarray
    _rref_cache: list = dc_field(default_factory=list, repr=False, compare=False)

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_rows(field: Field, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        if rows and len({len(r) for r in rows}) > 1:
            raise UsageError("ragged rows")
        ncols = len(rows[0]) if rows else 0
        data = np.empty((len(rows), ncols), dtype=field.dtype)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                data[i, j] = field.coerce(x)
        return Matrix(field, data)

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        return Matrix(field, field.zeros((rows, cols)))

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        m = field.zeros((n, n))
        one = field.one()
        for i in range(n):
            m[i, i] = one
        return Matrix(field, m)

    @staticmethod
    def from_columns(field: Field, cols) -> "Matrix":
        if not cols:
            return Matrix.zeros(field, 0, 0)
        return Matrix.from_rows(field, cols).transpose()

    # -- basic shape/access ------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, ij):
        return self.data[ij]

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j].copy()

    def to_lists(self):
        return [list(row) for row in self.data]

    def format_entries(self):
        """Row-major entry strings (exact scalars) for reports."""
        return [self.field.format_scalar(x) for x in self.data.reshape(-1)]

    # -- arithmetic ---------------------------------------------------------

    def _wrap(self, data: np.ndarray) -> "Matrix":
        return Matrix(self.field, self.field.normalize(data))

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._wrap(self.data + other.data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._wrap(self.data - other.data)

    def __neg__(self) -> "Matrix":
        return self._wrap(-self.data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise UsageError(f"shape mismatch {self.data.shape} @ {other.data.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return self._wrap(self.data @ other.data)

    def scale(self, c) -> "Matrix":
        return self._wrap(self.data * self.field.coerce(c))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, np.hstack([self.data, other.data]))

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, np.vstack([self.data, other.data]))

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(self.field, self.data[np.ix_(row_idx, col_idx)].copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.data.shape == other.data.shape
            and bool(np.all(self.data == other.data))
        )

    def __hash__(self):
        return hash((self.field, self.data.shape, self.fingerprint()))

    def is_zero(self) -> bool:
        return self.data.size == 0 or not np.any(self.data != 0)

    def fingerprint(self) -> bytes:
        if isinstance(self.field, PrimeField):
            return self.data.tobytes()
        return repr(self.to_lists()).encode()

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_lists()})"

    # -- elimination ---------------------------------------------------------

    def rref(self):
        """Reduced row echelon form: (R, pivot column indices)."""
        if not self._rref_cache:
            self._rref_cache.append(_rref(self.field, self.data))
        R, pivots = self._rref_cache[0]
        return Matrix(self.field, R), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Columns spanning the right kernel, in canonical form."""
        R, pivots = self.rref()
        n = self.cols
        free = [j for j in range(n) if j not in pivots]
        basis = self.field.zeros((n, len(free)))
        one = self.field.one()
        for k, f in enumerate(free):
            basis[f, k] = one
            for r, pc in enumerate(pivots):
                basis[pc, k] = -R.data[r, f]
        return Matrix(self.field, self.field.normalize(basis))

    def image_basis(self) -> "Matrix":
        """Original pivot columns: independent, spanning the column space."""
        _, pivots = self.rref()
        return Matrix(self.field, self.data[:, list(pivots)].copy())

    def column_space_canonical(self):
        """Canonical column-space basis (column RREF): (basis, pivot row indices)."""
        R, pivots = self.transpose().rref()
        return Matrix(self.field, R.data[: len(pivots)].T.copy()), pivots

    def row_space_fingerprint(self) -> bytes:
        R, pivots = self.rref()
        return Matrix(self.field, R.data[: len(pivots)]).fingerprint()

    def column_space_fingerprint(self) -> bytes:
        return self.transpose().row_space_fingerprint()

    def solve(self, b: "Matrix"):
        """Solve A x = b for all columns of b.  None when inconsistent."""
        if b.rows != self.rows:
            raise UsageError(f"solve: rows {self.rows} != rhs rows {b.rows}")
        aug = self.hstack(b)
        R, pivots = aug.rref()
        n = self.cols
        if any(p >= n for p in pivots):
            return None
        x = self.field.zeros((n, b.cols))
        for r, pc in enumerate(pivots):
            x[pc, :] = R.data[r, n:]
        return Matrix(self.field, x)

    def inverse(self):
        """Inverse of a square matrix, or None when singular."""
        if self.rows != self.cols:
            raise UsageError("inverse of a non-square matrix")
        sol = self.solve(Matrix.identity(self.field, self.rows))
        if sol is None:
            return None
        # Consistency alone does not prove invertibility; rank does.
        return sol if self.rank() == self.rows else None

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    # -- polynomial data ------------------------------------------------------

    def charpoly(self):
        """Coefficients [1, a_{n-1}, ..., a_0] of det(t*I - A), exactly."""
        if self.rows != self.cols:
            raise UsageError("characteristic polynomial of a non-square matrix")
        return char_poly(self)

    def power(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise UsageError("power of a non-square matrix")
        out = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_nilpotent(self) -> bool:
        if self.rows != self.cols:
            raise UsageError("nilpotency of a non-square matrix")
        return self.power(max(self.rows, 1)).is_zero()


def _rref(field: Field, data: np.ndarray):
    """Generic exact RREF; pivot = first nonzero entry in column order."""
    R = data.copy()
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        col = R[r:, c]
        nz = np.nonzero(col != 0)[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        inv = field.inv(R[r, c])
        R[r] = field.normalize(R[r] * inv)
        other = np.nonzero(R[:, c] != 0)[0]
        for i in other:
            if i != r:
                R[i] = field.normalize(R[i] - R[i, c] * R[r])
        pivots.append(c)
        r += 1
    return R, tuple(pivots)


def rank_kernel_image(a: Matrix):
    """(rank, kernel basis columns, image basis columns) of one matrix."""
    return a.rank(), a.kernel_basis(), a.image_basis()


def solve_linear(a: Matrix, b: Matrix):
    """Solution of a @ x = b, or None when the system is inconsistent."""
    return a.solve(b)


def char_poly(a: Matrix):
    """Exact characteristic polynomial coefficients, leading term first.

    Over F_p the entries are lifted to integers, the integer polynomial is
    computed exactly, and the coefficients are reduced mod p (char poly
    commutes with reduction).
    """
    n = a.rows
    if isinstance(a.field, PrimeField):
        lifted = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                lifted[i, j] = Fraction(int(a.data[i, j]))
        coeffs = _faddeev(lifted)
        out = []
        for c in coeffs:
            assert c.denominator == 1
            out.append(c.numerator % a.field.p)
        return out
    return _faddeev(a.data)


def _faddeev(data: np.ndarray):
    """Faddeev-LeVerrier recursion over Q (exact: divisions are by integers)."""
    n = data.shape[0]
    if n == 0:
        return [Fraction(1)]
    ident = np.empty((n, n), dtype=object)
    ident[...] = Fraction(0)
    for i in range(n):
        ident[i, i] = Fraction(1)
    coeffs = [Fraction(1)]
    B = ident
    for k in range(1, n + 1):
        AB = data @ B
        ck = -sum(AB[i, i] for i in range(n)) / k
        coeffs.append(ck)
        B = AB + ck * ident
    return coeffs


def block_diag(field: Field, mats) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = field.zeros((rows, cols))
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.data
        r += m.rows
        c += m.cols
    return Matrix(field, out)


@dataclass(frozen=True)
class PsdVerdict:
    verdict: str  # positive_definite | positive_semidefinite_with_radical | indefinite
    radical_basis: Matrix | None


def psd_verdict(s: Matrix) -> PsdVerdict:
    """Definiteness of a symmetric rational matrix by exact coefficient signs.

    With det(t*I - S) = t^n - e1 t^(n-1) + e2 t^(n-2) - ..., the e_k are the
    elementary symmetric functions of the (real) eigenvalues; S is positive
    semidefinite iff all e_k >= 0 and definite iff all e_k > 0.
    """
    if not isinstance(s.field, Rationals):
        raise UsageError("definiteness test requires rational entries")
    if s.rows != s.cols or s != s.transpose():
        raise UsageError("definiteness test requires a symmetric matrix")
    coeffs = s.charpoly()
    n = s.rows
    es = [(-1) ** k * coeffs[k] for k in range(1, n + 1)]
    if any(e < 0 for e in es):
        return PsdVerdict("indefinite", None)
    if all(e > 0 for e in es):
        return PsdVerdict("positive_definite", None)
    return PsdVerdict("positive_semidefinite_with_radical", s.kernel_basis())


# -- fast F_2 fingerprints for enumeration-heavy callers ---------------------


def f2_pack_rows(data: np.ndarray):
    """Rows of a 0/1 int matrix as Python ints (bit j = column j)."""
    out = []
    for row in data:
        v = 0
        for j, x in enumerate(row):
            if int(x) & 1:
                v |= 1 << j
        out.append(v)
    return out


def f2_row_echelon(packed_rows):
    """Canonical reduced row basis of the span of packed F_2 rows."""
    piv = {}  # leading-bit position -> row
    for row in packed_rows:
        while row:
            m = row.bit_length() - 1
            if m in piv:
                row ^= piv[m]
            else:
                piv[m] = row
                break
    for m in sorted(piv):
        r = piv[m]
        for m2 in sorted(piv, reverse=True):
            if m2 != m and (piv[m2] >> m) & 1:
                piv[m2] ^= r
    return tuple(piv[m] for m in sorted(piv, reverse=True))


def f2_row_space_fp(data: np.ndarray):
    return f2_row_echelon(f2_pack_rows(data))


def f2_col_space_fp(data: np.ndarray):
    return f2_row_echelon(f2_pack_rows(data.T))
