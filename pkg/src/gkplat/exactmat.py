"""Exact integer and rational matrix arithmetic.

All lattice bookkeeping that decides integrality (symplectic Gram matrices,
Hermite normal forms, unimodular transforms) runs on arbitrary-precision
Python integers; scales are `fractions.Fraction`.  No floating point enters
this module.

Lattice generators are stored row-wise: the rows of the base matrix are the
basis vectors, and a generator M = sqrt(scale_sq) * base.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotUnimodular, Singular

Rational = Fraction


class IntMatrix:
    """Dense integer matrix with arbitrary-precision entries, row-major."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[int(x) for x in r] for r in rows]
        if self.rows:
            ncols = len(self.rows[0])
            if any(len(r) != ncols for r in self.rows):
                raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(m)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"IntMatrix({self.rows!r})"

    def copy(self) -> "IntMatrix":
        return IntMatrix([r[:] for r in self.rows])

    def transpose(self) -> "IntMatrix":
        m, n = self.shape
        return IntMatrix([[self.rows[i][j] for i in range(m)] for j in range(n)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        bt = other.transpose().rows
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.rows]
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * a for a in r] for r in self.rows])

    def matvec(self, v):
        return [sum(a * x for a, x in zip(row, v)) for row in self.rows]

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        m, n = self.shape
        if m != n:
            raise ValueError("determinant of non-square matrix")
        if n == 0:
            return 1
        a = [r[:] for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_numpy(self, dtype=float) -> np.ndarray:
        return np.array(self.rows, dtype=dtype)

    def to_fraction_rows(self):
        return [[Fraction(a) for a in r] for r in self.rows]


def hnf(A: IntMatrix):
    """Row-style Hermite normal form.

    Returns (H, U) with U @ A == H, |det U| = 1.  H is in row echelon form
    with positive pivots, entries above each pivot reduced into [0, pivot),
    and zero rows collected at the bottom.
    """
    m, n = A.shape
    H = [r[:] for r in A.rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            if len(nz) == 1:
                break
            for i in range(r + 1, m):
                if H[i][c] != 0:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q != 0:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
            if r == m:
                break
    return IntMatrix(H), IntMatrix(U)


def unimodular_inverse(U: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1."""
    d = U.det()
    if d not in (1, -1):
        raise NotUnimodular(f"determinant is {d}, not +-1")
    n = U.shape[0]
    adj = _adjugate(U)
    if d == 1:
        return adj
    return -adj


def _adjugate(A: IntMatrix) -> IntMatrix:
    """Adjugate via exact fraction-free elimination: adj(A) = det(A) * A^-1."""
    n = A.shape[0]
    d = A.det()
    if d == 0:
        raise Singular("adjugate of singular matrix not supported")
    inv = invert_fraction(A)
    rows = []
    for r in inv:
        row = []
        for x in r:
            y = x * d
            assert y.denominator == 1
            row.append(y.numerator)
        rows.append(row)
    return IntMatrix(rows)


def invert_fraction(A: IntMatrix):
    """Exact inverse as nested lists of Fractions (Gauss-Jordan)."""
    n = A.shape[0]
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(A.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


@dataclass(frozen=True)
class ExactScaledMatrix:
    """Lattice generator M = sqrt(scale_sq) * base with integer base.

    scale_sq is a positive rational; the rows of base are the basis vectors.
    """

    base: IntMatrix
    scale_sq: Fraction

    def __post_init__(self):
        if self.scale_sq <= 0:
            raise ValueError("scale_sq must be positive")
        object.__setattr__(self, "scale_sq", Fraction(self.scale_sq))

    @property
    def shape(self):
        return self.base.shape

    def to_numpy(self) -> np.ndarray:
        return float(self.scale_sq) ** 0.5 * self.base.to_numpy()

    def det(self) -> Fraction:
        """|det M| as an exact rational (shape must be square and the value
        rational, which holds for all full-rank generators used here)."""
        m, n = self.shape
        d2 = self.scale_sq ** n * Fraction(self.base.det()) ** 2
        r = _fraction_sqrt(d2)
        if r is None:
            raise ValueError("determinant is irrational")
        return r

    def gram(self):
        """Exact euclidean Gram matrix M M^T as Fraction rows."""
        g = self.base @ self.base.transpose()
        return [[self.scale_sq * x for x in r] for r in g.rows]

    def normalized(self) -> "ExactScaledMatrix":
        """Equivalent representation with the base content (entry gcd)
        absorbed into the scale."""
        import math

        g = 0
        for row in self.base.rows:
            for x in row:
                g = math.gcd(g, abs(x))
        if g in (0, 1):
            return self
        base = IntMatrix([[x // g for x in row] for row in self.base.rows])
        return ExactScaledMatrix(base, self.scale_sq * g * g)


def exact_gram(M: ExactScaledMatrix):
    """Exact symmetric Gram matrix of a scaled generator (Fraction rows)."""
    return M.gram()


def _fraction_sqrt(x: Fraction):
    """sqrt of a nonnegative rational if it is rational, else None."""
    if x < 0:
        return None
    num = _isqrt_exact(x.numerator)
    den = _isqrt_exact(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def kron(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    ma, na = A.shape
    mb, nb = B.shape
    rows = []
    for i in range(ma):
        for k in range(mb):
            rows.append(
                [A.rows[i][j] * B.rows[k][l] for j in range(na) for l in range(nb)]
            )
    return IntMatrix(rows)
