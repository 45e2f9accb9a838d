"""Lattice algorithms: LLL reduction, exact SVP/CVP by enumeration, Babai
rounding, theta series, GKP distance, Gaussian heuristic and transference
checks.

Inputs are either `ExactScaledMatrix` generators (exact squared lengths come
out as Fractions) or plain real row-basis arrays.  Enumeration runs in float
via `enumkernel`; on the exact path candidate vectors are re-scored with
integer arithmetic, so reported minima and theta multiplicities are exact.

Exact SVP/CVP here is limited to dimension 24 ("desk scale"); HKZ
preprocessing is replaced by LLL + full enumeration, which returns the same
minima in these dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import enumkernel
from .errors import DimensionTooLarge
from .exactmat import ExactScaledMatrix, IntMatrix, invert_fraction

MAX_ENUM_DIM = 24

# -----------------------------------------------------------------------
# basis plumbing


def _float_basis(M):
    if isinstance(M, ExactScaledMatrix):
        return M.to_numpy()
    return np.asarray(M, dtype=float)


def _check_dim(m, limit=MAX_ENUM_DIM):
    if m > limit:
        raise DimensionTooLarge(f"dimension {m} exceeds enumeration limit {limit}")


def lll(M, delta: float = 0.99):
    """LLL-reduce a row basis.  Returns (reduced, U) with U @ M == reduced.

    U is exact (arbitrary-precision integers); `reduced` has the same type as
    the input (ExactScaledMatrix in, ExactScaledMatrix out).
    """
    B0 = _float_basis(M)
    m = B0.shape[0]
    B = B0.copy()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    mu, b2 = enumkernel.gso(B)
    mu = np.array(mu)
    b2 = np.array(b2)
    k = 1
    while k < m:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q != 0:
                B[k] -= q * B[j]
                U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                mu[k, : j + 1] -= q * mu[j, : j + 1]
        if b2[k] >= (delta - mu[k, k - 1] ** 2) * b2[k - 1]:
            k += 1
            continue
        B[[k - 1, k]] = B[[k, k - 1]]
        U[k - 1], U[k] = U[k], U[k - 1]
        # Cohen alg. 2.6.3 swap update of the GSO data
        mu_kk = mu[k, k - 1]
        Bnew = b2[k] + mu_kk * mu_kk * b2[k - 1]
        mu[k, k - 1] = mu_kk * b2[k - 1] / Bnew
        b2[k] = b2[k - 1] * b2[k] / Bnew
        b2[k - 1] = Bnew
        if k >= 2:
            tmp = mu[k - 1, : k - 1].copy()
            mu[k - 1, : k - 1] = mu[k, : k - 1]
            mu[k, : k - 1] = tmp
        if k + 1 < m:
            t = mu[k + 1 :, k].copy()
            mu[k + 1 :, k] = mu[k + 1 :, k - 1] - mu_kk * t
            mu[k + 1 :, k - 1] = t + mu[k, k - 1] * mu[k + 1 :, k]
        k = max(k - 1, 1)
    Umat = IntMatrix(U)
    if isinstance(M, ExactScaledMatrix):
        return ExactScaledMatrix(Umat @ M.base, M.scale_sq), Umat
    return B, Umat


@dataclass
class _Reduced:
    """Cached reduction of a generator: float basis, GSO data, transform."""

    source: object
    B: np.ndarray
    U: IntMatrix
    mu: np.ndarray
    b2: np.ndarray

    @property
    def exact(self):
        return isinstance(self.source, ExactScaledMatrix)

    def exact_norm_sq(self, coeffs) -> Fraction:
        """Exact squared length of sum_i coeffs_i * (reduced basis row i)."""
        base = (self.U @ self.source.base).rows
        v = [0] * len(base[0])
        for c, row in zip(coeffs, base):
            ci = int(c)
            if ci:
                v = [a + ci * b for a, b in zip(v, row)]
        return self.source.scale_sq * sum(a * a for a in v)

    def vector(self, coeffs) -> np.ndarray:
        return np.asarray(coeffs, dtype=float) @ self.B

    def input_coeffs(self, coeffs):
        """Coefficients w.r.t. the original (input) basis."""
        out = [0] * len(self.U.rows)
        for c, row in zip(coeffs, self.U.rows):
            ci = int(c)
            if ci:
                out = [a + ci * b for a, b in zip(out, row)]
        return out


def _reduce(M) -> _Reduced:
    red, U = lll(M)
    B = _float_basis(red)
    mu, b2 = enumkernel.gso(B)
    return _Reduced(M, B, U, np.array(mu), np.array(b2))


# -----------------------------------------------------------------------
# SVP / CVP / Babai


def svp(M):
    """Exact shortest nonzero vector.  Returns (vector, length)."""
    red = _reduce(M)
    _check_dim(len(red.b2))
    r2 = float(np.min(np.einsum("ij,ij->i", red.B, red.B)))
    x, d2 = enumkernel.shortest_nonzero(red.mu, red.b2, r2)
    if x is None:
        raise RuntimeError("no nonzero vector found (degenerate basis?)")
    if red.exact:
        coeffs, _ = enumkernel.enumerate_points(
            red.mu, red.b2, np.zeros(len(red.b2)), d2 * (1 + 1e-9), skip_zero=True
        )
        best = min(red.exact_norm_sq(c) for c in coeffs)
        xs = [c for c in coeffs if red.exact_norm_sq(c) == best]
        x = xs[0]
        return red.vector(x), math.sqrt(float(best))
    return red.vector(x), math.sqrt(d2)


def lambda1_sq_exact(M: ExactScaledMatrix) -> Fraction:
    """Exact squared length of the shortest nonzero vector."""
    red = _reduce(M)
    _check_dim(len(red.b2))
    r2 = float(np.min(np.einsum("ij,ij->i", red.B, red.B)))
    x, d2 = enumkernel.shortest_nonzero(red.mu, red.b2, r2)
    coeffs, _ = enumkernel.enumerate_points(
        red.mu, red.b2, np.zeros(len(red.b2)), d2 * (1 + 1e-9), skip_zero=True
    )
    return min(red.exact_norm_sq(c) for c in coeffs)


def closest_coeffs(red: _Reduced, t):
    """Near-optimal reduced-basis coefficient vectors for CVP.

    The target is Babai-shifted into the fundamental cell first (an exact
    integer relabeling of the enumeration), which keeps the float
    enumeration well conditioned for far-away targets.  Returns
    (tie_coeffs, dist2).
    """
    t = np.asarray(t, dtype=float)
    center = np.linalg.solve(red.B.T, t)
    xb = np.asarray(_babai_coeffs(red.mu, red.b2, center), dtype=np.int64)
    centered = center - xb
    r2 = float(np.sum((centered @ red.B) ** 2))
    ties, d2 = enumkernel.closest(red.mu, red.b2, centered, r2)
    return [np.asarray(x, dtype=np.int64) + xb for x in ties], d2


def cvp(M, t):
    """Exact closest lattice vector to t.  Returns (vector, distance).

    Distance ties are broken by the lexicographically smallest coefficient
    vector with respect to the input basis.
    """
    red = _reduce(M)
    _check_dim(len(red.b2))
    ties, d2 = closest_coeffs(red, t)
    cand = sorted(tuple(red.input_coeffs(x)) for x in ties)
    x = cand[0]
    vec = np.asarray(x, dtype=float) @ _float_basis(red.source)
    return vec, math.sqrt(max(d2, 0.0))


def _babai_coeffs(mu, b2, center):
    m = len(b2)
    x = [0] * m
    for i in range(m - 1, -1, -1):
        s = center[i]
        for j in range(i + 1, m):
            s -= mu[j, i] * (x[j] - center[j])
        x[i] = int(round(s))
    return x


def babai(M_reduced, t):
    """Babai nearest-plane on an (assumed reduced) row basis."""
    B = _float_basis(M_reduced)
    mu, b2 = enumkernel.gso(B)
    center = np.linalg.solve(np.asarray(B).T, np.asarray(t, dtype=float))
    x = _babai_coeffs(np.array(mu), np.array(b2), center)
    return np.asarray(x, dtype=float) @ B


# -----------------------------------------------------------------------
# theta series


@dataclass
class ThetaSeries:
    """Distance distribution up to a cutoff: sorted (squared length, count)."""

    entries: list
    radius_sq: object

    def as_dict(self):
        return dict(self.entries)

    def evaluate(self, tau: complex) -> complex:
        """Sum of N_d * q^d over the stored entries, q = exp(2 pi i tau)."""
        q = np.exp(2j * np.pi * tau)
        return sum(cnt * q ** float(d2) for d2, cnt in self.entries)

    def min_nonzero_sq(self):
        for d2, _ in self.entries:
            if d2 != 0:
                return d2
        return None


def theta_series(M, radius_sq) -> ThetaSeries:
    """Multiplicity count of all lattice vectors with ||x||^2 <= radius_sq.

    Boundary vectors are included.  Exact inputs give exact Fraction keys;
    float inputs coalesce keys within 1e-9.
    """
    return _theta(M, None, radius_sq)


def theta_series_shifted(M, shift, radius_sq) -> ThetaSeries:
    """Theta series of the packing L + shift (float keys)."""
    return _theta(M, np.asarray(shift, dtype=float), radius_sq)


def _theta(M, shift, radius_sq) -> ThetaSeries:
    red = _reduce(M)
    m = len(red.b2)
    _check_dim(m)
    if shift is None:
        center = np.zeros(m)
    else:
        center = np.linalg.solve(red.B.T, -shift)
        xb = np.asarray(_babai_coeffs(red.mu, red.b2, center), dtype=np.int64)
        center = center - xb
    coeffs, d2s = enumkernel.enumerate_points(
        red.mu, red.b2, center, float(radius_sq) * (1 + 1e-9) + 1e-12
    )
    counts: dict = {}
    if red.exact and shift is None:
        for c in coeffs:
            key = red.exact_norm_sq(c)
            if key <= radius_sq:
                counts[key] = counts.get(key, 0) + 1
    else:
        tol = 1e-9
        keys: list = []
        for d2 in sorted(d2s):
            d2 = float(d2)
            if d2 > float(radius_sq) + tol:
                continue
            if keys and abs(d2 - keys[-1]) <= tol * max(1.0, abs(keys[-1])):
                counts[keys[-1]] += 1
            else:
                keys.append(d2)
                counts[d2] = 1
    entries = sorted(counts.items())
    return ThetaSeries(entries, radius_sq)


def theta_functional_check(M, tau: complex) -> tuple:
    """Both sides of the Poisson-summation functional equation in this
    package's nome convention (q = exp(2 pi i tau)):

        Theta_Ldual(tau) = det(L) (i / 2 tau)^n Theta_L(-1 / 4 tau)

    for an m = 2n dimensional lattice.  (Stated with the classical nome the
    prefactor is the familiar (i/tau)^n at -1/tau; the extra factors of two
    translate between the conventions.)  Truncation radii are chosen so the
    Gaussian tails sit below 1e-10.  Returns (lhs, rhs).
    """
    B = _float_basis(M)
    m = B.shape[0]
    det = abs(np.linalg.det(B))
    s = tau.imag
    if s <= 0 or abs(tau.real) > 1e-12:
        raise ValueError("check expects tau on the positive imaginary axis")
    r_direct = 26.0 * (4 * s) / (2 * math.pi)
    r_dual = 26.0 / (2 * math.pi * s)
    dual = euclidean_dual(M)
    th = theta_series(M, r_direct)
    thd = theta_series(dual, r_dual)
    lhs = det * (1j / (2 * tau)) ** (m // 2) * th.evaluate(-1.0 / (4 * tau))
    rhs = thd.evaluate(tau)
    return lhs, rhs


# -----------------------------------------------------------------------
# GKP distance


def gkp_distance(code) -> float:
    """Euclidean distance: length of the shortest vector in L_dual - L."""
    d2 = gkp_distance_sq(code)
    return math.sqrt(float(d2))


def gkp_distance_sq(code):
    """Squared distance; exact Fraction on the exact path.

    `code` provides: logical_dim, gram (IntMatrix A) and dual_generator()
    (canonical symplectic dual basis).
    """
    if code.logical_dim == 1:
        raise ValueError("code encodes no logical information (L = L_dual)")
    dual = code.dual_generator()
    red = _reduce(dual)
    m = len(red.b2)
    _check_dim(m)
    A = code.gram
    detA = A.det()
    inv = invert_fraction(A)

    def is_stabilizer(c_input) -> bool:
        # x = c * M_dual lies in L iff c * A^-1 is integral
        a = [sum(ci * inv[i][j] for i, ci in enumerate(c_input)) for j in range(m)]
        return all(x.denominator == 1 for x in a)

    gh = gaussian_heuristic(m, 1.0 / float(code.logical_dim))
    r2 = (1.5 * gh) ** 2
    for _ in range(32):
        coeffs, d2s = enumkernel.enumerate_points(
            red.mu, red.b2, np.zeros(m), r2, skip_zero=True
        )
        logical = [c for c in coeffs if not is_stabilizer(red.input_coeffs(c))]
        if logical:
            if red.exact:
                return min(red.exact_norm_sq(c) for c in logical)
            idx = {tuple(c): d for c, d in zip(map(tuple, coeffs), d2s)}
            return min(idx[tuple(c)] for c in logical)
        r2 *= 2
    raise RuntimeError("no logical vector found; radius growth exhausted")


# -----------------------------------------------------------------------
# heuristics and transference


def gaussian_heuristic(n_dim: int, det: float) -> float:
    """Expected shortest length sqrt(n / 2 pi e) * det^(1/n) of a random
    full-rank lattice."""
    if det <= 0:
        raise ValueError("determinant must be positive")
    return math.sqrt(n_dim / (2 * math.pi * math.e)) * det ** (1.0 / n_dim)


def successive_minima(M):
    """All successive minima lambda_1 <= ... <= lambda_m by enumeration."""
    red = _reduce(M)
    m = len(red.b2)
    _check_dim(m, limit=12)
    r2 = float(np.max(np.einsum("ij,ij->i", red.B, red.B)))
    for _ in range(16):
        coeffs, d2s = enumkernel.enumerate_points(
            red.mu, red.b2, np.zeros(m), r2, skip_zero=True
        )
        order = np.argsort(d2s)
        picked = []
        norms = []
        rows = []
        for idx in order:
            c = coeffs[idx]
            cand = rows + [c.astype(float)]
            if np.linalg.matrix_rank(np.array(cand), tol=1e-9) == len(cand):
                rows.append(c.astype(float))
                picked.append(c)
                norms.append(math.sqrt(d2s[idx]))
                if len(picked) == m:
                    return norms
        r2 *= 2
    raise RuntimeError("successive minima search exhausted")


def euclidean_dual(M):
    """Canonical euclidean dual basis M* with M* M^T = I."""
    if isinstance(M, ExactScaledMatrix):
        detB = M.base.det()
        inv = invert_fraction(M.base)
        n = M.shape[0]
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                v = inv[j][i] * detB
                assert v.denominator == 1
                row.append(v.numerator)
            rows.append(row)
        return ExactScaledMatrix(
            IntMatrix(rows), Fraction(1) / (M.scale_sq * detB * detB)
        )
    B = np.asarray(M, dtype=float)
    return np.linalg.inv(B).T


def transference_check(M) -> dict:
    """Check 1 <= lambda_1(L) * lambda_2n(L*) <= 2n (and the swapped form)."""
    B = _float_basis(M)
    m = B.shape[0]
    _check_dim(m, limit=12)
    minima = successive_minima(M)
    dual_minima = successive_minima(euclidean_dual(M))
    p1 = minima[0] * dual_minima[-1]
    p2 = dual_minima[0] * minima[-1]
    return {
        "lambda1": minima[0],
        "lambda_max_dual": dual_minima[-1],
        "product": p1,
        "product_swapped": p2,
        "lower_ok": p1 >= 1.0 - 1e-9 and p2 >= 1.0 - 1e-9,
        "upper_ok": p1 <= m + 1e-9 and p2 <= m + 1e-9,
    }
