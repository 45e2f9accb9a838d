"""Builders for named lattices and composite codes: root lattices,
Construction A from binary symplectic codes, glued lattices and tensor
products.

Named bases reproduce the standard presentations (D4 with its unimodular
diagonalizer, E8 with the transform to a symplectic basis, the extended
Hamming stabilizer matrix).  The E8 basis has a half-integer row and is
stored exactly as sqrt(1/4) times an integer matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidGlue, NotIntegral, NotSelfOrthogonal, TooLarge, UnknownName
from .exactmat import ExactScaledMatrix, IntMatrix, hnf, invert_fraction, kron
from .gkpcode import GkpCode, new_code
from .symplectic import standard_J

# ---------------------------------------------------------------------------
# named lattices

D4_BASIS = IntMatrix(
    [[1, 1, 0, 0], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]
)
# unimodular U with U A U^T = J_2 (x) diag(1, 2) for the D4 basis above
D4_DIAGONALIZER = IntMatrix(
    [[-1, 0, 0, 0], [-1, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]]
)

_E8_SIMPLE = [
    [1, -1, 0, 0, 0, 0, 0, 0],
    [0, 1, -1, 0, 0, 0, 0, 0],
    [0, 0, 1, -1, 0, 0, 0, 0],
    [0, 0, 0, 1, -1, 0, 0, 0],
    [0, 0, 0, 0, 1, -1, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, 0],
    [0, 0, 0, 0, 0, 0, 1, -1],
]
# rows doubled, scale 1/4: last row is the half-integer glue vector
E8_BASIS = ExactScaledMatrix(
    IntMatrix([[2 * x for x in r] for r in _E8_SIMPLE]
              + [[1, 1, 1, 1, 1, -1, -1, -1]]),
    Fraction(1, 4),
)
# unimodular U with U A U^T = J_8 for the E8 basis above
E8_SYMPLECTIZER = IntMatrix(
    [
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 2, 1, 0, 0, 0],
        [0, 0, 0, 3, 2, 1, 0, 0],
        [1, 2, 3, 4, 3, 2, 1, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 1],
    ]
)

# extended Hamming [8,4,4] stabilizer rows (binary symplectic representation)
HAMMING8_ROWS = [
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 0, 1, 1, 0, 0, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 1],
    [1, 1, 1, 1, 1, 1, 1, 1],
]


def a2_basis() -> np.ndarray:
    """Hexagonal lattice normalized to unit determinant (float path)."""
    return np.array([[2.0, 0.0], [1.0, math.sqrt(3.0)]]) / (
        math.sqrt(2.0) * 3.0 ** 0.25
    )


def named_lattice(name: str):
    """Standard bases: Z2, A2 (float), D4, E8."""
    key = name.strip().lower()
    if key == "z2":
        return ExactScaledMatrix(IntMatrix.identity(2), Fraction(1))
    if key == "a2":
        return a2_basis()
    if key == "d4":
        return ExactScaledMatrix(D4_BASIS, Fraction(1))
    if key == "e8":
        return E8_BASIS
    raise UnknownName(f"unknown lattice name {name!r}")


# ---------------------------------------------------------------------------
# Construction A


@dataclass
class BinarySymplecticCode:
    """Stabilizer rows of an [[n, k]] qubit code in binary symplectic form
    (X part then Z part), pairwise symplectically orthogonal mod 2.

    `modes` is only needed for the r = 0 code (no generator rows).
    """

    generators: IntMatrix  # r x 2n over {0, 1}
    modes: int = 0

    def __post_init__(self):
        rows = self.generators.rows
        if not rows and self.modes < 1:
            raise NotSelfOrthogonal("empty code needs an explicit mode count")
        if rows and any(x not in (0, 1) for r in rows for x in r):
            raise NotSelfOrthogonal("generators must be binary")
        if rows:
            cols = self.generators.shape[1]
            if cols % 2 != 0:
                raise NotSelfOrthogonal("row length must be even")
            if self.modes and self.modes != cols // 2:
                raise NotSelfOrthogonal("mode count does not match row length")
            self.modes = cols // 2
        n = self.modes
        for i, qi in enumerate(rows):
            for qj in rows[i:]:
                s = sum(qi[a] * qj[n + a] + qi[n + a] * qj[a] for a in range(n))
                if s % 2 != 0:
                    raise NotSelfOrthogonal(
                        "rows are not symplectically orthogonal mod 2"
                    )
        if rows and _gf2_rank([r[:] for r in rows]) != len(rows):
            raise NotSelfOrthogonal("generator rows are dependent mod 2")

    @classmethod
    def trivial(cls, n: int) -> "BinarySymplecticCode":
        return cls(IntMatrix([]), modes=n)

    @property
    def n(self) -> int:
        return self.modes

    @property
    def r(self) -> int:
        return self.generators.shape[0]

    @property
    def k(self) -> int:
        return self.n - self.r


def _gf2_rank(rows) -> int:
    rank = 0
    ncols = len(rows[0])
    rows = [sum(b << i for i, b in enumerate(r)) for r in rows]
    for col in range(ncols):
        piv = next((r for r in rows if (r >> col) & 1), None)
        if piv is None:
            continue
        rows = [r ^ piv if r is not piv and (r >> col) & 1 else r for r in rows]
        rows.remove(piv)
        rank += 1
    return rank


def construction_a(Q: BinarySymplecticCode) -> GkpCode:
    """Mod-2 preimage lattice of a binary symplectic code, scaled by 1/sqrt(2).

    The overcomplete stack (1/sqrt 2) [B_Q; 2 I] is row-reduced by exact HNF;
    the resulting code encodes 2^k dimensions.
    """
    n2 = 2 * Q.n
    stack = IntMatrix(
        [r[:] for r in Q.generators.rows]
        + [[2 if i == j else 0 for j in range(n2)] for i in range(n2)]
    )
    H, _ = hnf(stack)
    basis = IntMatrix(H.rows[:n2])
    if any(all(x == 0 for x in row) for row in basis.rows):
        raise NotSelfOrthogonal("stack did not reduce to a full-rank basis")
    code = new_code(ExactScaledMatrix(basis, Fraction(1, 2)))
    assert code.logical_dim == 2 ** Q.k
    code._cache["binary_code"] = Q
    return code


def hexagonal_mode_transform() -> np.ndarray:
    """Single-mode symplectic map sending the square code to the hexagonal
    one: S = M_A2^T."""
    return a2_basis().T * math.sqrt(1.0)


def concat_hexagonal(Q: BinarySymplecticCode) -> GkpCode:
    """Concatenation with local hexagonal codes: the square Construction A
    lattice pushed through the per-mode symplectic S_hex (float path)."""
    sq = construction_a(Q)
    S1 = hexagonal_mode_transform()
    n = sq.n
    S = np.zeros((2 * n, 2 * n))
    S[:n, :n] = S1[0, 0] * np.eye(n)
    S[:n, n:] = S1[0, 1] * np.eye(n)
    S[n:, :n] = S1[1, 0] * np.eye(n)
    S[n:, n:] = S1[1, 1] * np.eye(n)
    M = sq.generator_numpy() @ S.T
    return new_code(M)


def weight_enumerator(Q: BinarySymplecticCode):
    """Hamming weight distribution A_0..A_{2n} of the row span of B_Q."""
    r = Q.r
    if 2 ** r > 2 ** 24:
        raise TooLarge("too many codewords to enumerate")
    n2 = 2 * Q.n
    counts = [0] * (n2 + 1)
    gens = [sum(b << i for i, b in enumerate(row)) for row in Q.generators.rows]
    for mask in range(2 ** r):
        word = 0
        mm = mask
        idx = 0
        while mm:
            if mm & 1:
                word ^= gens[idx]
            mm >>= 1
            idx += 1
        counts[bin(word).count("1")] += 1
    return counts


def theta2(tau: complex) -> complex:
    """theta_2(tau) = sum_m q^((m + 1/2)^2), q = exp(2 pi i tau)."""
    q = np.exp(2j * np.pi * tau)
    total = 0.0 + 0.0j
    m = 0
    while True:
        t = q ** ((m + 0.5) ** 2)
        total += 2 * t
        if abs(t) < 1e-16 and m > 2:
            break
        m += 1
    return total


def theta3(tau: complex) -> complex:
    """theta_3(tau) = sum_m q^(m^2)."""
    q = np.exp(2j * np.pi * tau)
    total = 1.0 + 0.0j
    m = 1
    while True:
        t = q ** (m * m)
        total += 2 * t
        if abs(t) < 1e-16 and m > 2:
            break
        m += 1
    return total


def weight_enumerator_theta(Q: BinarySymplecticCode, tau: complex) -> complex:
    """W_Q(theta3(2 tau), theta2(2 tau)): the Construction A theta series."""
    a = theta3(2 * tau)
    b = theta2(2 * tau)
    counts = weight_enumerator(Q)
    n2 = 2 * Q.n
    return sum(c * a ** (n2 - i) * b ** i for i, c in enumerate(counts))


# ---------------------------------------------------------------------------
# glue


@dataclass
class GlueGroup:
    """Extra coset generators appended to a direct-sum base lattice.

    Generators are rational coordinate rows in units of the base lattice's
    scale: the appended vector is sqrt(scale_sq) * g.  Orders n_i are the
    smallest positive integers with n_i g_i in L0.
    """

    generators: list  # list of lists of Fraction
    orders: list


def glue(blocks: list, G: GlueGroup) -> GkpCode:
    """Glued code from exact direct-sum blocks plus glue vectors.

    All blocks must share one scale_sq.  Raises InvalidGlue when a glue
    invariant fails; the determinant identity det(L0[G]) = det(L0)/prod(n_i)
    is checked exactly.
    """
    if not blocks:
        raise InvalidGlue("need at least one block")
    gens = [b.generator if isinstance(b, GkpCode) else b for b in blocks]
    if not all(isinstance(g, ExactScaledMatrix) for g in gens):
        raise InvalidGlue("glue requires exact blocks")
    scale = gens[0].scale_sq
    if any(g.scale_sq != scale for g in gens):
        raise InvalidGlue("blocks must share a common scale")
    sizes = [g.shape[0] for g in gens]
    total = sum(sizes)
    B0 = IntMatrix.zeros(total, total)
    off = 0
    for g in gens:
        m = g.shape[0]
        for i in range(m):
            for j in range(m):
                B0.rows[off + i][off + j] = g.base[i, j]
        off += m
    n = total // 2
    J = standard_J(n)
    glue_rows = [[Fraction(x) for x in row] for row in G.generators]
    if any(len(row) != total for row in glue_rows):
        raise InvalidGlue("glue vector has wrong dimension")

    B0inv = invert_fraction(B0)
    for g, order in zip(glue_rows, G.orders):
        # n_i g_i must land in L0, and no smaller positive multiple may
        coeff = [sum(g[i] * B0inv[i][j] for i in range(total)) for j in range(total)]
        for k in range(1, order + 1):
            integral = all((k * c).denominator == 1 for c in coeff)
            if k < order and integral:
                raise InvalidGlue(f"glue order is {k}, not the declared {order}")
            if k == order and not integral:
                raise InvalidGlue("order * glue vector is not in the base lattice")
        # integer symplectic product with every base vector: g J B0^T integer
        for row in B0.rows:
            v = sum(
                scale * g[a] * J[a, b] * row[b]
                for a in range(total)
                for b in range(total)
            )
            if v.denominator != 1:
                raise InvalidGlue("glue vector is not in the symplectic dual")
    for i, gi in enumerate(glue_rows):
        for gj in glue_rows[i:]:
            v = scale * sum(
                gi[a] * J[a, b] * gj[b] for a in range(total) for b in range(total)
            )
            if v.denominator != 1:
                raise InvalidGlue("glue vectors have fractional symplectic product")

    den = 1
    for row in glue_rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    stacked = IntMatrix(
        [[a * den for a in row] for row in B0.rows]
        + [[int(x * den) for x in row] for row in glue_rows]
    )
    H, _ = hnf(stacked)
    basis = IntMatrix(H.rows[:total])
    code = new_code(ExactScaledMatrix(basis, scale / (den * den)))
    det_l0 = abs(B0.det()) * scale ** n
    norder = 1
    for o in G.orders:
        norder *= o
    expected = det_l0 / norder
    got = ExactScaledMatrix(basis, scale / (den * den)).det()
    if got != expected:
        raise InvalidGlue(
            f"glued determinant {got} does not match det(L0)/|G| = {expected}"
        )
    return code


# ---------------------------------------------------------------------------
# tensor product


def tensor_product(code1: GkpCode, L2: ExactScaledMatrix) -> GkpCode:
    """Tensor code of a single-mode GKP code with an integral euclidean
    lattice: generator M1 (x) M2, Gram A1 (x) G2."""
    if code1.n != 1 or not code1.exact:
        raise NotIntegral("first factor must be an exact single-mode code")
    G2 = L2.gram()
    if any(x.denominator != 1 for row in G2 for x in row):
        raise NotIntegral("second factor must have an integral euclidean Gram")
    M1 = code1.generator
    base = kron(M1.base, L2.base)
    M = ExactScaledMatrix(base, M1.scale_sq * L2.scale_sq)
    return new_code(M)
