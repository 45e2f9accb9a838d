# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled lattice enumeration kernel; semantics match gkplat._enum_py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()

BACKEND = "cython"


def gso(B):
    """Gram-Schmidt data of row basis B: (mu, bstar2)."""
    B = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t m = B.shape[0]
    cdef Py_ssize_t n = B.shape[1]
    mu_np = np.zeros((m, m), dtype=np.float64)
    bstar_np = np.zeros((m, n), dtype=np.float64)
    bstar2_np = np.zeros(m, dtype=np.float64)
    cdef double[:, :] Bv = B
    cdef double[:, :] mu = mu_np
    cdef double[:, :] bstar = bstar_np
    cdef double[:] bstar2 = bstar2_np
    cdef Py_ssize_t i, j, k
    cdef double dot
    for i in range(m):
        for k in range(n):
            bstar[i, k] = Bv[i, k]
        for j in range(i):
            dot = 0.0
            for k in range(n):
                dot += Bv[i, k] * bstar[j, k]
            mu[i, j] = dot / bstar2[j]
            for k in range(n):
                bstar[i, k] -= mu[i, j] * bstar[j, k]
        dot = 0.0
        for k in range(n):
            dot += bstar[i, k] * bstar[i, k]
        bstar2[i] = dot
        mu[i, i] = 1.0
    return mu_np, bstar2_np


cdef struct ListCtx:
    double bound
    Py_ssize_t m
    Py_ssize_t count
    Py_ssize_t cap
    bint skip_zero
    Py_ssize_t max_points


cdef int _list_recurse(double[:, :] mu, double[:] bstar2, double[:] center,
                       Py_ssize_t i, long long[:] x, double acc,
                       ListCtx *ctx, list out, list dists) except -1:
    cdef Py_ssize_t m = ctx.m
    cdef double s = center[i]
    cdef Py_ssize_t j
    cdef long long x0, cand
    cdef double diff, nd
    cdef Py_ssize_t k = 0
    cdef bint lo_dead = False, hi_dead = False, side_hi, nonzero
    for j in range(i + 1, m):
        s -= mu[j, i] * (x[j] - center[j])
    x0 = <long long> _round(s)
    while not (lo_dead and hi_dead):
        if k == 0:
            cand = x0
        elif k % 2 == 1:
            cand = x0 + (k + 1) // 2
        else:
            cand = x0 - k // 2
        k += 1
        side_hi = cand >= x0
        if (side_hi and hi_dead) or ((not side_hi) and lo_dead):
            continue
        diff = cand - s
        nd = acc + bstar2[i] * diff * diff
        if nd > ctx.bound:
            if k == 1:
                return 0
            if side_hi:
                hi_dead = True
            else:
                lo_dead = True
            continue
        x[i] = cand
        if i == 0:
            nonzero = False
            for j in range(m):
                if x[j] != 0:
                    nonzero = True
                    break
            if not (ctx.skip_zero and not nonzero):
                out.append(np.asarray(x).copy())
                dists.append(nd)
                ctx.count += 1
                if ctx.count > ctx.max_points:
                    raise MemoryError("enumeration produced too many points")
        else:
            _list_recurse(mu, bstar2, center, i - 1, x, nd, ctx, out, dists)
    return 0


cdef inline double _round(double v):
    return floor(v + 0.5)


def enumerate_points(mu, bstar2, center, double radius2,
                     Py_ssize_t max_points=2_000_000, bint skip_zero=False):
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    bstar2 = np.ascontiguousarray(bstar2, dtype=np.float64)
    center = np.ascontiguousarray(center, dtype=np.float64)
    cdef Py_ssize_t m = bstar2.shape[0]
    cdef ListCtx ctx
    ctx.bound = radius2 * (1 + 1e-12) + 1e-12
    ctx.m = m
    ctx.count = 0
    ctx.cap = 0
    ctx.skip_zero = skip_zero
    ctx.max_points = max_points
    out: list = []
    dists: list = []
    x_np = np.zeros(m, dtype=np.int64)
    cdef long long[:] x = x_np
    _list_recurse(mu, bstar2, center, m - 1, x, 0.0, &ctx, out, dists)
    if not out:
        return np.zeros((0, m), dtype=np.int64), np.zeros(0)
    return np.array(out, dtype=np.int64), np.array(dists)


cdef struct BestCtx:
    double d
    bint found


cdef int _svp_recurse(double[:, :] mu, double[:] bstar2, Py_ssize_t i,
                      long long[:] x, double acc, BestCtx *best,
                      long long[:] bx) except -1:
    cdef Py_ssize_t m = bstar2.shape[0]
    cdef double s = 0.0
    cdef Py_ssize_t j
    cdef long long x0, cand
    cdef double diff, nd
    cdef Py_ssize_t k = 0
    cdef bint lo_dead = False, hi_dead = False, side_hi, nonzero
    for j in range(i + 1, m):
        s -= mu[j, i] * x[j]
    x0 = <long long> _round(s)
    while not (lo_dead and hi_dead):
        if k == 0:
            cand = x0
        elif k % 2 == 1:
            cand = x0 + (k + 1) // 2
        else:
            cand = x0 - k // 2
        k += 1
        side_hi = cand >= x0
        if (side_hi and hi_dead) or ((not side_hi) and lo_dead):
            continue
        diff = cand - s
        nd = acc + bstar2[i] * diff * diff
        if nd > best.d:
            if k == 1:
                return 0
            if side_hi:
                hi_dead = True
            else:
                lo_dead = True
            continue
        x[i] = cand
        if i == 0:
            nonzero = False
            for j in range(m):
                if x[j] != 0:
                    nonzero = True
                    break
            if nonzero and 0.0 < nd < best.d:
                best.d = nd
                best.found = True
                for j in range(m):
                    bx[j] = x[j]
        else:
            _svp_recurse(mu, bstar2, i - 1, x, nd, best, bx)
    return 0


def shortest_nonzero(mu, bstar2, double radius2_init):
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    bstar2 = np.ascontiguousarray(bstar2, dtype=np.float64)
    cdef Py_ssize_t m = bstar2.shape[0]
    cdef BestCtx best
    best.d = radius2_init * (1 + 1e-12) + 1e-12
    best.found = False
    x_np = np.zeros(m, dtype=np.int64)
    bx_np = np.zeros(m, dtype=np.int64)
    cdef long long[:] x = x_np
    cdef long long[:] bx = bx_np
    _svp_recurse(mu, bstar2, m - 1, x, 0.0, &best, bx)
    if not best.found:
        return None, float("inf")
    return bx_np, best.d


cdef int _cvp_recurse(double[:, :] mu, double[:] bstar2, double[:] center,
                      Py_ssize_t i, long long[:] x, double acc, BestCtx *best,
                      list pts) except -1:
    cdef Py_ssize_t m = bstar2.shape[0]
    cdef double s = center[i]
    cdef Py_ssize_t j
    cdef long long x0, cand
    cdef double diff, nd, incumbent
    cdef Py_ssize_t k = 0
    cdef bint lo_dead = False, hi_dead = False, side_hi
    for j in range(i + 1, m):
        s -= mu[j, i] * (x[j] - center[j])
    x0 = <long long> _round(s)
    while not (lo_dead and hi_dead):
        if k == 0:
            cand = x0
        elif k % 2 == 1:
            cand = x0 + (k + 1) // 2
        else:
            cand = x0 - k // 2
        k += 1
        side_hi = cand >= x0
        if (side_hi and hi_dead) or ((not side_hi) and lo_dead):
            continue
        diff = cand - s
        nd = acc + bstar2[i] * diff * diff
        if nd > best.d:
            if k == 1:
                return 0
            if side_hi:
                hi_dead = True
            else:
                lo_dead = True
            continue
        x[i] = cand
        if i == 0:
            pts.append((np.asarray(x).copy(), nd))
            incumbent = nd + 1e-9 * (nd if nd > 1.0 else 1.0) + 1e-12
            if incumbent < best.d:
                best.d = incumbent
        else:
            _cvp_recurse(mu, bstar2, center, i - 1, x, nd, best, pts)
    return 0


def closest(mu, bstar2, center, double radius2_init):
    mu = np.ascontiguousarray(mu, dtype=np.float64)
    bstar2 = np.ascontiguousarray(bstar2, dtype=np.float64)
    center = np.ascontiguousarray(center, dtype=np.float64)
    cdef Py_ssize_t m = bstar2.shape[0]
    cdef BestCtx best
    best.d = radius2_init * (1 + 1e-12) + 1e-9
    best.found = False
    pts: list = []
    x_np = np.zeros(m, dtype=np.int64)
    cdef long long[:] x = x_np
    _cvp_recurse(mu, bstar2, center, m - 1, x, 0.0, &best, pts)
    if not pts:
        return [], float("inf")
    dmin = min(d for _, d in pts)
    tol = 1e-9 * max(1.0, dmin) + 1e-12
    ties = [p for p, d in pts if d <= dmin + tol]
    return ties, dmin
