"""The GKP code object: construction from a lattice generator, phase
function, logical operator bases, equivalence tests and normal forms.

A code is specified by a full-rank 2n x 2n generator M whose rows span the
stabilizer lattice; M J M^T must be integral.  Generators are either exact
(`ExactScaledMatrix`) or real arrays: the exact path covers all
integer-expressible codes (square, concatenated, NTRU, D4, E8), the float
path covers irrational bases such as the hexagonal code, with 1e-9
tolerances.  The symplectic Gram matrix itself is always exact.

The constructor's input basis is the pivot basis: the phase function is
normalized so every input basis vector carries phase 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NotFullRank, NotInLattice, NotIntegral
from .exactmat import ExactScaledMatrix, IntMatrix
from .symplectic import (
    canonical_dual,
    canonical_dual_float,
    frobenius_normal_form,
    is_symplectic,
    symplectic_gram,
    symplectic_gram_float,
)

FLOAT_TOL = 1e-9
COEFF_TOL = 1e-7


@dataclass
class GkpCode:
    """Validated GKP code: generator, integer symplectic Gram, type, and the
    unimodular transform U with U A U^T = J_2 (x) D."""

    n: int
    generator: object  # ExactScaledMatrix or (2n, 2n) float array
    gram: IntMatrix
    code_type: tuple
    logical_dim: int
    canon_transform: IntMatrix
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def exact(self) -> bool:
        return isinstance(self.generator, ExactScaledMatrix)

    def generator_numpy(self) -> np.ndarray:
        if self.exact:
            return self.generator.to_numpy()
        return np.asarray(self.generator, dtype=float)

    def dual_generator(self):
        """Canonical symplectic dual basis: M_dual J M^T = I (so M = A M_dual)."""
        if "dual" not in self._cache:
            if self.exact:
                self._cache["dual"] = canonical_dual(self.generator)
            else:
                self._cache["dual"] = canonical_dual_float(self.generator_numpy())
        return self._cache["dual"]

    def dual_generator_numpy(self) -> np.ndarray:
        d = self.dual_generator()
        return d.to_numpy() if isinstance(d, ExactScaledMatrix) else d

    def canonical_generator_numpy(self) -> np.ndarray:
        """Basis in which the Gram matrix is J_2 (x) D."""
        return self.canon_transform.to_numpy() @ self.generator_numpy()


def new_code(M) -> GkpCode:
    """Validate a generator and build the code object.

    Raises NotFullRank for singular input and NotIntegral when M J M^T has a
    non-integer entry.
    """
    if isinstance(M, ExactScaledMatrix):
        rows, cols = M.shape
        if rows != cols or rows % 2 != 0:
            raise NotFullRank("generator must be square of even size")
        if M.base.det() == 0:
            raise NotFullRank("generator is singular")
        A = symplectic_gram(M)
        gen = M
    else:
        Mf = np.asarray(M, dtype=float)
        rows, cols = Mf.shape
        if rows != cols or rows % 2 != 0:
            raise NotFullRank("generator must be square of even size")
        if abs(np.linalg.det(Mf)) < 1e-12:
            raise NotFullRank("generator is singular")
        A = symplectic_gram_float(Mf)
        gen = Mf
    n = rows // 2
    U, D = frobenius_normal_form(A)
    k = 1
    for d in D:
        k *= d
    # consistency: logical_dim^2 == |det A| and logical_dim == |det M|
    detA = abs(A.det())
    if k * k != detA:
        raise NotIntegral(f"det A = {detA} is not the square of prod(D) = {k}")
    if isinstance(gen, np.ndarray):
        dm = abs(np.linalg.det(gen))
        if abs(dm - k) > 1e-6 * max(1.0, k):
            raise NotIntegral("float |det M| does not match the integer type")
    return GkpCode(n=n, generator=gen, gram=A, code_type=D, logical_dim=k,
                   canon_transform=U)


def phase_function(code: GkpCode, xi) -> float:
    """Phase (0 or pi) attached to the stabilizer displacement at lattice
    vector xi, relative to the pivot basis."""
    M = code.generator_numpy()
    a = np.linalg.solve(M.T, np.asarray(xi, dtype=float))
    ai = np.rint(a)
    if np.max(np.abs(a - ai)) > COEFF_TOL:
        raise NotInLattice("vector is not in the stabilizer lattice")
    ai = [int(x) for x in ai]
    m = 2 * code.n
    acc = 0
    for i in range(m):
        if ai[i]:
            for j in range(i):
                acc += ai[i] * code.gram[i, j] * ai[j]
    return math.pi * (acc % 2)


@dataclass
class LogicalBasis:
    """Dual-basis pairs (e_i, f_i) with e_i^T J f_i = 1/d_i."""

    e: np.ndarray  # (n, 2n)
    f: np.ndarray  # (n, 2n)
    d: tuple

    def label_vector(self, label) -> np.ndarray:
        """Real representative of a logical label l in Z^{2n}."""
        n = len(self.d)
        v = np.zeros(self.e.shape[1])
        for i in range(n):
            v += int(label[i]) * self.e[i] + int(label[n + i]) * self.f[i]
        return v


def logical_basis(code: GkpCode) -> LogicalBasis:
    if "logical_basis" in code._cache:
        return code._cache["logical_basis"]
    n = code.n
    Mc = code.canonical_generator_numpy()
    Ac = np.kron(np.array([[0.0, 1.0], [-1.0, 0.0]]), np.diag(code.code_type))
    dual = np.linalg.solve(Ac, Mc)  # M_can_dual = A_can^-1 M_can
    lb = LogicalBasis(e=dual[:n].copy(), f=dual[n:].copy(), d=code.code_type)
    code._cache["logical_basis"] = lb
    return lb


def reduce_label(code: GkpCode, label) -> tuple:
    """Element-wise reduction of a label vector modulo (D, D)."""
    n = code.n
    out = []
    for i, l in enumerate(label):
        out.append(int(l) % code.code_type[i % n])
    return tuple(out)


def symplectically_equivalent(code1: GkpCode, code2: GkpCode):
    """Codes are equivalent iff their types agree; returns (bool, witness).

    The witness S is symplectic and links the canonical bases:
    canonical(code1) = canonical(code2) @ S^T within 1e-9.
    """
    if code1.n != code2.n:
        return False, None
    if code1.code_type != code2.code_type:
        return False, None
    n = code1.n
    DI = np.diag([float(d) for d in code1.code_type] + [1.0] * n)
    M1 = code1.canonical_generator_numpy()
    M2 = code2.canonical_generator_numpy()
    P1 = np.linalg.solve(DI, M1)
    P2 = np.linalg.solve(DI, M2)
    S = (np.linalg.solve(P2, P1)).T
    if not is_symplectic(S, tol=1e-7):
        raise RuntimeError("witness construction failed to be symplectic")
    return True, S


def normal_generator(code: GkpCode):
    """Generator of the symplectically equivalent product-form code: per mode
    a sqrt(d_i)-scaled square lattice.

    Exactly representable (single quadratic scale) iff all d_i share one
    squarefree part; otherwise the float matrix is returned.
    """
    D = code.code_type
    parts = [_squarefree_decomp(d) for d in D]
    if len({f for f, _ in parts}) == 1:
        f = parts[0][0]
        diag = [m for _, m in parts]
        base = IntMatrix(
            [[diag[i] if i == j else 0 for j in range(2 * code.n)]
             for i in range(code.n)]
            + [[diag[i - code.n] if i == j else 0 for j in range(2 * code.n)]
               for i in range(code.n, 2 * code.n)]
        )
        return ExactScaledMatrix(base, Fraction(f))
    vals = [math.sqrt(d) for d in D]
    return np.diag(vals + vals)


def _squarefree_decomp(d: int):
    """d = f * m^2 with f squarefree; returns (f, m)."""
    f, m = d, 1
    k = 2
    while k * k <= f:
        while f % (k * k) == 0:
            f //= k * k
            m *= k
        k += 1
    return f, m


def code_summary(code: GkpCode, distance=None) -> dict:
    """JSON-ready summary of a code."""
    out = {
        "n": code.n,
        "type": list(code.code_type),
        "logical_dim": code.logical_dim,
        "gram": [[int(x) for x in row] for row in code.gram.rows],
    }
    if distance is not None:
        out["distance"] = float(distance)
    return out
