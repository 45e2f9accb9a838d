"""Symplectic forms, skew normal forms, canonical dual bases and 2x2 real
symplectic decompositions.

Conventions: the symplectic form is J = [[0, I], [-I, 0]]; lattice basis
vectors are matrix rows; the symplectic Gram matrix of a generator M is
A = M J M^T.  Integer work is exact, real work uses 1e-9 tolerances.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import Degenerate, NotIntegral, NotSymplectic, Singular
from .exactmat import ExactScaledMatrix, IntMatrix, invert_fraction

SYMPLECTIC_TOL = 1e-9


def standard_J(n: int) -> IntMatrix:
    """The 2n x 2n symplectic form [[0, I], [-I, 0]]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = []
    for i in range(n):
        rows.append([0] * (2 * n))
        rows[-1][n + i] = 1
    for i in range(n):
        rows.append([0] * (2 * n))
        rows[-1][i] = -1
    return IntMatrix(rows)


def standard_J_numpy(n: int) -> np.ndarray:
    return standard_J(n).to_numpy()


def symplectic_gram(M: ExactScaledMatrix) -> IntMatrix:
    """A = M J M^T, returned only when exactly integer.

    Raises NotIntegral otherwise: the generator then does not define an
    Abelian displacement group.
    """
    m, ncols = M.shape
    if ncols % 2 != 0:
        raise ValueError("generator must have an even number of columns")
    n = ncols // 2
    J = standard_J(n)
    G = (M.base @ J) @ M.base.transpose()
    rows = []
    for r in G.rows:
        row = []
        for x in r:
            v = M.scale_sq * x
            if v.denominator != 1:
                raise NotIntegral(f"symplectic Gram entry {v} is not an integer")
            row.append(v.numerator)
        rows.append(row)
    A = IntMatrix(rows)
    return A


def symplectic_gram_float(M: np.ndarray, tol: float = 1e-7) -> IntMatrix:
    """Float-path Gram: round M J M^T and require integrality within tol."""
    n = M.shape[0] // 2
    J = standard_J_numpy(n)
    G = M @ J @ M.T
    R = np.rint(G)
    if not np.allclose(G, R, atol=tol, rtol=0):
        raise NotIntegral("symplectic Gram matrix is not integral")
    return IntMatrix(R.astype(object).tolist())


def check_skew_nondegenerate(A: IntMatrix) -> None:
    m, n = A.shape
    if m != n or m % 2 != 0:
        raise ValueError("skew Gram matrix must be square of even size")
    if A.transpose() != -A:
        raise ValueError("matrix is not skew-symmetric")
    if A.det() == 0:
        raise Degenerate("skew form is degenerate")


def frobenius_normal_form(A: IntMatrix):
    """Skew Smith reduction: unimodular U with U A U^T = J_2 (x) D.

    D = diag(d_1, ..., d_n) with d_1 | d_2 | ... | d_n, all positive; the
    divisor chain is unique.  Returns (U, D) with D as a tuple of ints.
    """
    check_skew_nondegenerate(A)
    m = A.shape[0]
    n = m // 2
    B = [r[:] for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    for _ in range(10 * m + 100):
        _skew_reduce(B, U)
        pairs = [(B[2 * i][2 * i + 1], 2 * i) for i in range(n)]
        pairs.sort()
        bad = next(
            (k for k in range(n - 1) if pairs[k + 1][0] % pairs[k][0] != 0), None
        )
        if bad is None:
            order = [p[1] for p in pairs]
            perm = []
            for idx in order:
                perm.append(idx)
            perm_rows = [perm[k] for k in range(n)] + [perm[k] + 1 for k in range(n)]
            Bp = [[B[i][j] for j in perm_rows] for i in perm_rows]
            Up = [U[i][:] for i in perm_rows]
            D = tuple(Bp[i][n + i] for i in range(n))
            return IntMatrix(Up), D
        # couple the offending blocks and re-reduce
        i = pairs[bad][1]
        j = pairs[bad + 1][1]
        _congruence_add(B, U, i, j, 1)
    raise RuntimeError("skew normal form did not converge")


def _congruence_add(B, U, i, j, c):
    """Row/column congruence: row_i += c*row_j, col_i += c*col_j."""
    m = len(B)
    B[i] = [a + c * b for a, b in zip(B[i], B[j])]
    for r in range(m):
        B[r][i] += c * B[r][j]
    U[i] = [a + c * b for a, b in zip(U[i], U[j])]


def _congruence_swap(B, U, i, j):
    m = len(B)
    B[i], B[j] = B[j], B[i]
    for r in range(m):
        B[r][i], B[r][j] = B[r][j], B[r][i]
    U[i], U[j] = U[j], U[i]


def _congruence_negate(B, U, i):
    m = len(B)
    B[i] = [-a for a in B[i]]
    for r in range(m):
        B[r][i] = -B[r][i]
    U[i] = [-a for a in U[i]]


def _skew_reduce(B, U):
    """Greedy pairwise extraction: bring B to interleaved blocks
    diag([[0, d_i], [-d_i, 0]]) by unimodular congruence."""
    m = len(B)
    p = 0
    while p < m:
        while True:
            best = None
            for i in range(p, m):
                for j in range(i + 1, m):
                    v = abs(B[i][j])
                    if v != 0 and (best is None or v < best[0]):
                        best = (v, i, j)
            if best is None:
                raise Degenerate("skew form is degenerate")
            _, i, j = best
            if i != p:
                _congruence_swap(B, U, p, i)
                if j == p:
                    j = i
            if j != p + 1:
                _congruence_swap(B, U, p + 1, j)
            if B[p][p + 1] < 0:
                _congruence_negate(B, U, p + 1)
            d = B[p][p + 1]
            dirty = False
            for k in range(p + 2, m):
                if B[p][k] != 0:
                    q = B[p][k] // d
                    # row_k += -q * row_{p+1} changes B[p][k] by -q*d
                    _congruence_add(B, U, k, p + 1, -q)
                if B[p + 1][k] != 0:
                    q = B[p + 1][k] // (-d)
                    # row_k += -q * row_p changes B[p+1][k] by -q*B[p+1][p] = q*d
                    _congruence_add(B, U, k, p, -q)
            for k in range(p + 2, m):
                if B[p][k] != 0 or B[p + 1][k] != 0:
                    dirty = True
                    break
            if not dirty:
                break
        p += 2


def canonical_dual(M: ExactScaledMatrix) -> ExactScaledMatrix:
    """Canonical symplectic dual basis: M_dual J M^T = I.

    M_dual = M^-T J^T stays exactly representable: with M = sqrt(s) B,
    M_dual = sqrt(1 / (s det(B)^2)) * (adj(B)^T J^T).
    """
    m, ncols = M.shape
    n = ncols // 2
    detB = M.base.det()
    if detB == 0:
        raise Singular("generator is singular")
    inv = invert_fraction(M.base)  # B^-1 as Fractions = adj/det
    # det * B^-T is integer (the transposed adjugate); entry (i,j) = det*inv[j][i]
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            v = inv[j][i] * detB
            assert v.denominator == 1
            row.append(v.numerator)
        rows.append(row)
    base = IntMatrix(rows)
    Jt = standard_J(n).transpose()
    new_base = base @ Jt
    scale = Fraction(1, 1) / (M.scale_sq * detB * detB)
    return ExactScaledMatrix(new_base, scale)


def canonical_dual_float(M: np.ndarray) -> np.ndarray:
    n = M.shape[0] // 2
    J = standard_J_numpy(n)
    if abs(np.linalg.det(M)) < 1e-12:
        raise Singular("generator is singular")
    return np.linalg.inv(M).T @ J.T


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    n = S.shape[0] // 2
    J = standard_J_numpy(n)
    return bool(np.max(np.abs(S.T @ J @ S - J)) <= tol)


def squeezing_value(S: np.ndarray) -> float:
    """sq(S): largest singular value of a real symplectic matrix; >= 1."""
    if not is_symplectic(S):
        raise NotSymplectic("input does not preserve the symplectic form")
    return float(np.linalg.svd(S, compute_uv=False)[0])


class RealSymplectic2:
    """2x2 real matrix with unit determinant."""

    __slots__ = ("mat",)

    def __init__(self, mat):
        m = np.asarray(mat, dtype=float)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] - 1.0) > 1e-12:
            raise NotSymplectic("determinant must be 1")
        self.mat = m

    def __matmul__(self, other):
        return RealSymplectic2(self.mat @ other.mat)


def mobius(S, tau: complex) -> complex:
    """Upper-half-plane action ((a, b), (c, d)).tau = (a tau + b)/(c tau + d)."""
    m = S.mat if isinstance(S, RealSymplectic2) else np.asarray(S, dtype=float)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return (a * tau + b) / (c * tau + d)


def iwasawa_2(S: RealSymplectic2):
    """S = N A K with N a unit upper shear, A = diag(l, 1/l) > 0, K a rotation."""
    z = mobius(S, 1j)
    x, y = z.real, z.imag
    N = np.array([[1.0, x], [0.0, 1.0]])
    A = np.array([[np.sqrt(y), 0.0], [0.0, 1.0 / np.sqrt(y)]])
    K = np.linalg.inv(A) @ np.linalg.inv(N) @ S.mat
    return N, A, K


def bloch_messiah_2(S: RealSymplectic2):
    """S = O1 Dg O2 with O1, O2 rotations and Dg = diag(l, 1/l), l >= 1."""
    u, s, vt = np.linalg.svd(S.mat)
    # fix reflections so that both orthogonal factors are rotations
    if np.linalg.det(u) < 0:
        u = u @ np.diag([1.0, -1.0])
        vt = np.diag([1.0, -1.0]) @ vt
    Dg = np.diag([s[0], 1.0 / s[0]])
    return u, Dg, vt
