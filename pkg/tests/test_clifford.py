import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from gkplat import clifford as cf
from gkplat.constructions import a2_basis
from gkplat.errors import (
    NotHyperbolic,
    NotPrime,
    NotSymplecticModD,
    QTooLarge,
)
from gkplat.exactmat import ExactScaledMatrix, IntMatrix
from gkplat.gkpcode import new_code
from gkplat.symplectic import standard_J_numpy


def square_code(d=2):
    return new_code(ExactScaledMatrix(IntMatrix.identity(2), Fraction(d)))


def rot(theta):
    return np.array([[math.cos(theta), -math.sin(theta)],
                     [math.sin(theta), math.cos(theta)]])


# ---------------------------------------------------------------------------
# automorphisms


def test_square_hadamard_integral_representation():
    # the Hadamard rotation is the symplectic form itself: J = rot(-pi/2)
    ok, U = cf.is_symplectic_automorphism(square_code(), standard_J_numpy(1))
    assert ok
    assert U.rows == [[0, -1], [1, 0]]  # the S matrix
    # the opposite quarter turn is also an automorphism (rep J = S^-1)
    ok2, U2 = cf.is_symplectic_automorphism(square_code(), rot(math.pi / 2))
    assert ok2 and U2.rows == [[0, 1], [-1, 0]]


def test_hexagonal_integral_representation():
    hx = new_code(math.sqrt(2.0) * a2_basis())
    ok, U = cf.is_symplectic_automorphism(hx, rot(math.pi / 3))
    assert ok
    assert U.rows == [[0, 1], [-1, 1]]
    # 2 pi / 3 is also an automorphism (its rep is the square of the above)
    ok2, U2 = cf.is_symplectic_automorphism(hx, rot(2 * math.pi / 3))
    assert ok2
    sq = np.array([[0, 1], [-1, 1]]) @ np.array([[0, 1], [-1, 1]])
    assert np.array_equal(np.array(U2.rows), sq)


def test_square_code_rejects_sixfold_rotation():
    ok, U = cf.is_symplectic_automorphism(square_code(), rot(2 * math.pi / 3))
    assert not ok and U is None


def test_automorphisms_shared_with_dual():
    # for scaled codes each accepted g works on the dual basis as well
    hx = new_code(math.sqrt(2.0) * a2_basis())
    g = rot(math.pi / 3)
    Md = hx.dual_generator_numpy()
    U = Md @ g.T @ np.linalg.inv(Md)
    assert np.max(np.abs(U - np.rint(U))) < 1e-9
    assert round(abs(np.linalg.det(np.rint(U)))) == 1


# ---------------------------------------------------------------------------
# transvections


def test_transvection_properties():
    assert np.allclose(cf.transvection([0.0, 0.0]), np.eye(2))
    # t_{sqrt(d) e_i} f_i = f_i + e_i on the canonical dual pair
    d = 2
    e = np.array([1.0 / math.sqrt(d), 0.0])
    f = np.array([0.0, 1.0 / math.sqrt(d)])
    t = cf.transvection(math.sqrt(d) * e)
    assert np.allclose(t @ f, f + e, atol=1e-12)
    assert np.allclose(t @ e, e, atol=1e-12)
    # exact symplectic invariance and the conjugation identity
    rng = np.random.default_rng(0)
    J = standard_J_numpy(2)
    for _ in range(20):
        a = rng.normal(size=4)
        b = rng.normal(size=4)
        ta, tb = cf.transvection(a), cf.transvection(b)
        assert np.max(np.abs(ta.T @ J @ ta - J)) < 1e-12
        lhs = ta @ tb @ np.linalg.inv(ta)
        rhs = cf.transvection(ta @ b)
        assert np.max(np.abs(lhs - rhs)) < 1e-9
    # operator-norm bound for unit alpha
    for _ in range(10):
        a = rng.normal(size=2)
        a = a / np.linalg.norm(a)
        from gkplat.symplectic import squeezing_value

        assert squeezing_value(cf.transvection(a)) <= 2.0 + 1e-9


# ---------------------------------------------------------------------------
# generators and synthesis


def test_generator_matrices():
    n, d = 2, 5
    J1 = cf.generator_matrix(cf.Token("J", 1), n, d)
    sq = J1 @ J1 % d
    # J_i^2 = -I on qudit i (coordinates i and n+i), identity elsewhere
    want = np.eye(2 * n, dtype=np.int64)
    want[0, 0] = want[n, n] = -1
    assert np.array_equal(sq, want % d)
    # single mode: J^2 = -I globally
    J = cf.generator_matrix(cf.Token("J", 1), 1, d)
    assert np.array_equal(J @ J % d, (-np.eye(2, dtype=np.int64)) % d)
    # P maps X_1 -> X_1 Z_1 on label vectors (column action)
    P1 = cf.generator_matrix(cf.Token("P", 1), n, d)
    x1 = np.zeros(2 * n, dtype=np.int64)
    x1[0] = 1
    out = P1 @ x1 % d
    want = x1.copy()
    want[n] = 1
    assert np.array_equal(out, want)
    # B_ij = J_j^-1 C_{j->i} J_j
    B12 = cf.generator_matrix(cf.Token("B", 1, 2), n, d)
    J2g = cf.generator_matrix(cf.Token("J", 2), n, d)
    C21 = cf.generator_matrix(cf.Token("C", 2, 1), n, d)
    J2inv = np.linalg.matrix_power(J2g, 3) % d
    assert np.array_equal(J2inv @ C21 % d @ np.eye(2 * n, dtype=np.int64) % d,
                          J2inv @ C21 % d)
    prod = J2inv @ C21 % d
    prod = prod @ J2g % d
    assert np.array_equal(prod, B12)
    # every generator is symplectic mod d
    for tok in (cf.Token("J", 1), cf.Token("P", 2), cf.Token("C", 1, 2),
                cf.Token("B", 2, 1)):
        g = cf.generator_matrix(tok, n, d)
        assert cf.is_symplectic_mod(g, n, d)


def test_synthesize_identity_and_single_gate():
    word = cf.synthesize(np.eye(4, dtype=np.int64), 2, 3)
    assert word.length() == 0
    P1 = cf.generator_matrix(cf.Token("P", 1), 2, 3)
    word2 = cf.synthesize(P1, 2, 3)
    assert np.array_equal(word2.matrix(), P1)
    assert str(word2) == "P1"  # a shear target compiles to itself


def test_synthesize_random_grid():
    rng = np.random.default_rng(1)
    for (n, d) in [(2, 2), (2, 3), (3, 2), (2, 5)]:
        for _ in range(25):
            S = cf.random_symplectic_mod(n, d, rng)
            word = cf.synthesize(S, n, d)
            assert np.array_equal(word.matrix(), S % d)
            assert word.length() <= 20 * d * n * n


def test_synthesize_guards():
    with pytest.raises(NotPrime):
        cf.synthesize(np.eye(4, dtype=np.int64), 2, 4)
    bad = np.eye(4, dtype=np.int64)
    bad[0, 0] = 2
    with pytest.raises(NotSymplecticModD):
        cf.synthesize(bad, 2, 3)


def test_word_round_trip_text():
    rng = np.random.default_rng(2)
    S = cf.random_symplectic_mod(2, 3, rng)
    word = cf.synthesize(S, 2, 3)
    parsed = cf.parse_word(str(word), 2, 3)
    assert np.array_equal(parsed.matrix(), word.matrix())


# ---------------------------------------------------------------------------
# Rademacher


def test_rademacher_examples():
    res = cf.rademacher(cf.R_MAT @ cf.L_MAT)
    assert res.psi == 0
    assert res.word in ([("R", 1), ("L", 1)], [("L", 1), ("R", 1)])
    res2 = cf.rademacher(cf.R_MAT @ cf.R_MAT @ cf.L_MAT)
    assert res2.psi == 1
    assert cf.word_matrix(res2.word).tolist() == res2.representative.tolist()


def test_rademacher_rejects_elliptic():
    with pytest.raises(NotHyperbolic):
        cf.rademacher([[0, -1], [1, 0]])
    with pytest.raises(NotHyperbolic):
        cf.rademacher([[2, 1], [1, 2]])  # det 3


def test_rademacher_class_invariance():
    rng = np.random.default_rng(3)
    A = cf.word_matrix([("R", 2), ("L", 1), ("R", 1), ("L", 3)])
    base = cf.rademacher(A).psi
    assert base == 2 + 1 - 1 - 3
    checked = 0
    for _ in range(50):
        g = np.eye(2, dtype=object)
        for _ in range(6):
            m = cf.R_MAT if rng.integers(2) else cf.L_MAT
            g = g @ (m if rng.integers(2) else cf._int_inv(m))
        conj = g @ A @ cf._int_inv(g)
        assert cf.rademacher(conj).psi == base
        checked += 1
    assert checked == 50


def test_rademacher_mod_d_descent():
    # psi(A R^d) = psi(A) + d and A R^d = A mod d, so psi descends mod d
    rng = np.random.default_rng(4)
    done = 0
    while done < 20:
        word = []
        for _ in range(int(rng.integers(2, 5))):
            word.append(("R", int(rng.integers(1, 4))))
            word.append(("L", int(rng.integers(1, 4))))
        A = cf.word_matrix(word)
        d = int(rng.choice([2, 3, 5]))
        B = A @ cf.word_matrix([("R", d)])
        psi_a = cf.rademacher(A).psi
        psi_b = cf.rademacher(B).psi
        assert psi_b == psi_a + d
        assert psi_b % d == psi_a % d
        done += 1


# ---------------------------------------------------------------------------
# fundamental domain and modular forms


def in_fundamental_domain(z):
    return abs(z.real) <= 0.5 + 1e-12 and abs(z) >= 1.0 - 1e-12


def test_reduce_to_fundamental_domain():
    z, word = cf.reduce_to_fundamental_domain(1j)
    assert z == 1j and word == []
    z, word = cf.reduce_to_fundamental_domain(5 + 1j)
    assert abs(z - 1j) < 1e-12
    assert word == [("T", -5)]
    tau = 0.3 + 0.1j
    z, word = cf.reduce_to_fundamental_domain(tau)
    assert in_fundamental_domain(z)
    assert abs(cf.apply_st_word(word, tau) - z) <= 1e-10
    # idempotence
    z2, word2 = cf.reduce_to_fundamental_domain(z)
    assert word2 == [] or abs(z2 - z) < 1e-12


def test_q_expansions_special_values():
    out = cf.q_expansions(tau=1j, order=40)
    assert abs(out["j"] - 1728) < 1e-6
    rho = cmath.exp(2j * cmath.pi / 3)
    out2 = cf.q_expansions(tau=rho, order=40)
    assert abs(out2["j"]) < 1e-6
    with pytest.raises(QTooLarge):
        cf.q_expansions(q=0.6)


def test_q_expansions_modular_invariance():
    tau = 0.1 + 1.2j
    j0 = cf.q_expansions(tau=tau, order=40)["j"]
    j1 = cf.q_expansions(tau=tau + 1, order=40)["j"]
    j2 = cf.q_expansions(tau=-1 / tau, order=40)["j"]
    assert abs(j0 - j1) < 1e-6
    assert abs(j0 - j2) < 1e-6


def test_q_expansions_leading_terms():
    # j = 1/q + 744 + 196884 q + 21493760 q^2 + O(q^3)
    q = 0.004
    j = cf.q_expansions(q=q, order=40)["j"]
    series = 1 / q + 744 + 196884 * q
    # the residual is the known tail 21493760 q^2 + 864299970 q^3 + ...
    assert abs(j - series) < 30_000_000 * q * q
    assert abs(j - series - 21493760 * q * q) < 2 * 864299970 * q ** 3


def test_q_expansions_order_convergence():
    for tau in (1.2j, 0.3 + 0.9j):
        a = cf.q_expansions(tau=tau, order=20)
        b = cf.q_expansions(tau=tau, order=40)
        if abs(cmath.exp(2j * cmath.pi * tau)) < 0.1:
            assert abs(a["j"] - b["j"]) < 1e-10 * max(1.0, abs(b["j"]))


# ---------------------------------------------------------------------------
# circuit identities


def test_swap_from_sums():
    rep = cf.cv_circuit_identity_check("swap_from_sums")
    assert rep["holds"]
    assert rep["max_residual"] == 0.0


def test_sum_gate_action():
    S12 = cf._sum_gate(0, 1)
    vec = np.array([1.0, 2.0, 3.0, 4.0])  # (q1, q2, p1, p2)
    out = S12 @ vec
    assert np.allclose(out, [1.0, 3.0, -1.0, 4.0])


def test_knill_equals_steane():
    rep = cf.cv_circuit_identity_check("knill_equals_steane")
    assert rep["holds"]
    qt, pt = rep["sample"]["qt"], rep["sample"]["pt"]
    assert rep["phase"] == pytest.approx(-qt * pt / 2.0)
    # spot-check the operator identity in a truncated Fock space
    from gkplat.floquet import displacement_fock

    cutoff = 160
    n = np.arange(cutoff)
    # q and p in terms of raising/lowering operators
    a = np.diag(np.sqrt(n[1:]), k=1)
    qop = (a + a.T) / math.sqrt(2.0)
    pop = (a - a.T) / (1j * math.sqrt(2.0))
    import scipy.linalg

    lhs = scipy.linalg.expm(-1j * qt * pop) @ scipy.linalg.expm(1j * pt * qop)
    amp = np.array(rep["correction_amplitude"])
    rhs = cmath.exp(1j * rep["phase"]) * displacement_fock(amp, cutoff)
    block = slice(0, cutoff // 2)
    assert np.max(np.abs(lhs[block, block] - rhs[block, block])) < 1e-8
