"""The compiled and pure-Python enumeration kernels must agree exactly on
minima, point sets and tie structure."""

import numpy as np
import pytest

from gkplat import _enum_py, enumkernel

try:
    from gkplat import _enum_cy
except ImportError:  # pragma: no cover
    _enum_cy = None

needs_ext = pytest.mark.skipif(_enum_cy is None,
                               reason="compiled kernel not built")


def random_reduced(rng, m):
    from gkplat import latalg

    B = rng.integers(-5, 6, size=(m, m)).astype(float) + np.eye(m) * 4
    R, _ = latalg.lll(B)
    return R


@needs_ext
def test_gso_agrees():
    rng = np.random.default_rng(0)
    for m in (2, 4, 6):
        B = random_reduced(rng, m)
        mu1, b1 = _enum_py.gso(B)
        mu2, b2 = _enum_cy.gso(B)
        assert np.allclose(mu1, mu2, atol=1e-12)
        assert np.allclose(b1, b2, atol=1e-12)


@needs_ext
def test_shortest_agrees():
    rng = np.random.default_rng(1)
    for m in (2, 4, 6, 8):
        B = random_reduced(rng, m)
        mu, b2 = _enum_py.gso(B)
        r2 = float(np.min(np.einsum("ij,ij->i", B, B)))
        x1, d1 = _enum_py.shortest_nonzero(mu, b2, r2)
        x2, d2 = _enum_cy.shortest_nonzero(np.array(mu), np.array(b2), r2)
        assert d1 == pytest.approx(d2, rel=1e-12)


@needs_ext
def test_enumerate_points_agrees():
    rng = np.random.default_rng(2)
    for m in (2, 4, 6):
        B = random_reduced(rng, m)
        mu, b2 = _enum_py.gso(B)
        center = rng.uniform(-0.5, 0.5, m)
        radius2 = float(np.min(b2)) * 2.5
        c1, d1 = _enum_py.enumerate_points(mu, b2, center, radius2)
        c2, d2 = _enum_cy.enumerate_points(np.array(mu), np.array(b2),
                                           center, radius2)
        s1 = sorted(map(tuple, c1.tolist()))
        s2 = sorted(map(tuple, c2.tolist()))
        assert s1 == s2
        assert sorted(np.round(d1, 10)) == sorted(np.round(d2, 10))


@needs_ext
def test_closest_agrees():
    rng = np.random.default_rng(3)
    for m in (2, 4, 6):
        B = random_reduced(rng, m)
        mu, b2 = _enum_py.gso(B)
        center = rng.uniform(-3, 3, m)
        r2 = float(np.sum(b2))
        t1, d1 = _enum_py.closest(mu, b2, center, r2)
        t2, d2 = _enum_cy.closest(np.array(mu), np.array(b2), center, r2)
        assert d1 == pytest.approx(d2, rel=1e-12)
        assert sorted(map(tuple, (x.tolist() for x in t1))) == \
            sorted(map(tuple, (x.tolist() for x in t2)))


def test_active_backend_reported():
    assert enumkernel.BACKEND in ("cython", "python")
