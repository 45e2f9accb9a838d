import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkplat.errors import NotUnimodular
from gkplat.exactmat import (
    ExactScaledMatrix,
    IntMatrix,
    exact_gram,
    hnf,
    invert_fraction,
    unimodular_inverse,
)

D4_BASIS = IntMatrix([[1, 1, 0, 0], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]])
D4_U = IntMatrix([[-1, 0, 0, 0], [-1, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]])


def brute_force_hnf(A):
    """Oracle: search small unimodular U for the canonical row HNF of a
    2x2 integer matrix."""
    best = None
    rng = range(-3, 4)
    for entries in itertools.product(rng, repeat=4):
        U = IntMatrix([[entries[0], entries[1]], [entries[2], entries[3]]])
        if U.det() not in (1, -1):
            continue
        H = U @ A
        # canonical: echelon with positive pivots and reduced upper entries
        if H[1, 0] != 0:
            continue
        if H[0, 0] < 0 or H[1, 1] < 0:
            continue
        if H[0, 0] == 0 and H[0, 1] != 0 and H[1, 1] != 0:
            continue
        if H[0, 0] > 0 and H[1, 1] > 0 and not (0 <= H[0, 1] < H[1, 1]):
            continue
        key = tuple(x for row in H.rows for x in row)
        if best is None or key < best:
            best = key
    return best


def test_hnf_identity():
    H, U = hnf(IntMatrix.identity(2))
    assert H == IntMatrix.identity(2)
    assert U == IntMatrix.identity(2)


def test_hnf_derived_example():
    A = IntMatrix([[2, 0], [1, 1]])
    H, U = hnf(A)
    assert (U @ A) == H
    assert U.det() in (1, -1)
    assert H == IntMatrix([[1, 1], [0, 2]])
    oracle = brute_force_hnf(A)
    assert tuple(x for row in H.rows for x in row) == oracle


def test_hnf_zero_matrix():
    A = IntMatrix([[0, 0], [0, 0]])
    H, U = hnf(A)
    assert H.is_zero()
    assert U == IntMatrix.identity(2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_hnf_transform_property(rows):
    A = IntMatrix(rows)
    H, U = hnf(A)
    assert (U @ A) == H
    assert U.det() in (1, -1)
    # echelon: pivot columns strictly increase, zero rows at the bottom
    last_pivot = -1
    seen_zero = False
    for row in H.rows:
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None:
            seen_zero = True
            continue
        assert not seen_zero
        assert piv > last_pivot
        assert row[piv] > 0
        last_pivot = piv


def test_unimodular_inverse_identity_and_shear():
    assert unimodular_inverse(IntMatrix.identity(3)) == IntMatrix.identity(3)
    U = IntMatrix([[1, 1], [0, 1]])
    assert unimodular_inverse(U) == IntMatrix([[1, -1], [0, 1]])


def test_unimodular_inverse_d4_transform():
    V = unimodular_inverse(D4_U)
    assert (D4_U @ V) == IntMatrix.identity(4)
    assert (V @ D4_U) == IntMatrix.identity(4)


def test_unimodular_inverse_rejects():
    with pytest.raises(NotUnimodular):
        unimodular_inverse(IntMatrix([[2, 0], [0, 1]]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(-4, 4)),
                min_size=1, max_size=8))
def test_unimodular_inverse_on_shear_products(ops):
    U = IntMatrix.identity(3)
    shears = {
        (0, "a"): lambda c: IntMatrix([[1, c, 0], [0, 1, 0], [0, 0, 1]]),
        (1, "a"): lambda c: IntMatrix([[1, 0, 0], [c, 1, 0], [0, 0, 1]]),
    }
    for kind, c in ops:
        U = U @ shears[(kind, "a")](c)
    V = unimodular_inverse(U)
    assert (U @ V) == IntMatrix.identity(3)
    assert (V @ U) == IntMatrix.identity(3)


def test_exact_gram_examples():
    M = ExactScaledMatrix(IntMatrix.identity(2), Fraction(2))
    assert exact_gram(M) == [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]]
    M2 = ExactScaledMatrix(IntMatrix([[1, 1], [0, 2]]), Fraction(1, 2))
    assert exact_gram(M2) == [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(2)]]


def test_exact_gram_e8_diagonal():
    from gkplat.constructions import E8_BASIS

    G = exact_gram(E8_BASIS)
    assert all(G[i][i] == 2 for i in range(8))
    # symmetric
    assert all(G[i][j] == G[j][i] for i in range(8) for j in range(8))


def test_exact_gram_positive_semidefinite_minors():
    M = ExactScaledMatrix(IntMatrix([[2, 1, 0], [0, 1, 3], [1, 0, 1]]),
                          Fraction(3, 7))
    G = exact_gram(M)
    # leading principal minors of a Gram matrix of a full-rank basis are > 0
    for k in (1, 2, 3):
        sub = IntMatrix([[0] * k for _ in range(k)])
        den = 1
        for i in range(k):
            for j in range(k):
                den = max(den, G[i][j].denominator)
        scaled = IntMatrix(
            [[int(G[i][j] * den) for j in range(k)] for i in range(k)]
        )
        assert scaled.det() > 0


def test_bareiss_determinant_matches_fraction_inverse():
    A = IntMatrix([[3, 1, 2], [0, 4, 1], [5, 1, 1]])
    # cofactor expansion by hand: 3(4-1) - 1(0-5) + 2(0-20) = -26
    assert A.det() == -26
    inv = invert_fraction(A)
    for i in range(3):
        for j in range(3):
            s = sum(Fraction(A[i, k]) * inv[k][j] for k in range(3))
            assert s == (1 if i == j else 0)
