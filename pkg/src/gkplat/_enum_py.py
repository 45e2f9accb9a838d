"""Pure-Python lattice enumeration kernel (Fincke-Pohst, zig-zag order).

Reference implementation of the hot inner loops; `gkplat._enum_cy` is the
compiled twin with identical semantics.  `gkplat.enumkernel` picks one at
import time.

All routines work on the Gram-Schmidt data of an (ideally LLL-reduced) row
basis: `mu` is the unit lower-triangular GSO coefficient matrix and `bstar2`
the squared GSO norms.  Points are returned as integer coefficient vectors
with respect to that basis.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def gso(B: np.ndarray):
    """Gram-Schmidt data of row basis B: (mu, bstar2)."""
    m = B.shape[0]
    bstar = np.zeros((m, B.shape[1]), dtype=float)
    mu = np.zeros((m, m), dtype=float)
    bstar2 = np.zeros(m, dtype=float)
    for i in range(m):
        v = B[i].astype(float).copy()
        for j in range(i):
            mu[i, j] = np.dot(B[i], bstar[j]) / bstar2[j]
            v -= mu[i, j] * bstar[j]
        bstar[i] = v
        bstar2[i] = float(np.dot(v, v))
        mu[i, i] = 1.0
    return mu, bstar2


def _zigzag(x0, k):
    """k-th candidate around x0 in the order x0, x0+1, x0-1, x0+2, ..."""
    if k == 0:
        return x0
    if k % 2 == 1:
        return x0 + (k + 1) // 2
    return x0 - k // 2


def enumerate_points(mu, bstar2, center, radius2, max_points=2_000_000,
                     skip_zero=False):
    """All integer coefficient vectors within sqrt(radius2) of `center`.

    Returns (coeffs, dist2): int64 array of shape (k, m) and matching squared
    distances.  Boundary points (dist2 == radius2) are included.
    """
    m = len(bstar2)
    bound = radius2 * (1 + 1e-12) + 1e-12
    out: list = []
    dists: list = []
    _list_recurse(mu, bstar2, center, bound, m - 1,
                  np.zeros(m, dtype=np.int64), 0.0, out, dists, skip_zero,
                  max_points)
    if not out:
        return np.zeros((0, m), dtype=np.int64), np.zeros(0)
    return np.array(out, dtype=np.int64), np.array(dists)


def _list_recurse(mu, bstar2, center, bound, i, x, acc, out, dists, skip_zero,
                  max_points):
    m = len(bstar2)
    s = center[i]
    for j in range(i + 1, m):
        s -= mu[j, i] * (x[j] - center[j])
    x0 = int(round(s))
    k = 0
    lo_dead = False
    hi_dead = False
    while not (lo_dead and hi_dead):
        cand = _zigzag(x0, k)
        k += 1
        side_hi = cand >= x0
        if (side_hi and hi_dead) or (not side_hi and lo_dead):
            continue
        diff = cand - s
        nd = acc + bstar2[i] * diff * diff
        if nd > bound:
            if k == 1:
                return
            if side_hi:
                hi_dead = True
            else:
                lo_dead = True
            continue
        x[i] = cand
        if i == 0:
            if not (skip_zero and not x.any()):
                out.append(x.copy())
                dists.append(nd)
                if len(out) > max_points:
                    raise MemoryError("enumeration produced too many points")
        else:
            _list_recurse(mu, bstar2, center, bound, i - 1, x, nd, out, dists,
                          skip_zero, max_points)


def shortest_nonzero(mu, bstar2, radius2_init):
    """Shortest nonzero coefficient vector; returns (x, dist2) or (None, inf).

    The search radius shrinks on every improvement.
    """
    m = len(bstar2)
    best = {"x": None, "d": radius2_init * (1 + 1e-12) + 1e-12}
    _svp_recurse(mu, bstar2, m - 1, np.zeros(m, dtype=np.int64), 0.0, best)
    if best["x"] is None:
        return None, float("inf")
    return best["x"], best["d"]


def _svp_recurse(mu, bstar2, i, x, acc, best):
    m = len(bstar2)
    s = 0.0
    for j in range(i + 1, m):
        s -= mu[j, i] * x[j]
    x0 = int(round(s))
    k = 0
    lo_dead = False
    hi_dead = False
    while not (lo_dead and hi_dead):
        cand = _zigzag(x0, k)
        k += 1
        side_hi = cand >= x0
        if (side_hi and hi_dead) or (not side_hi and lo_dead):
            continue
        diff = cand - s
        nd = acc + bstar2[i] * diff * diff
        if nd > best["d"]:
            if k == 1:
                return
            if side_hi:
                hi_dead = True
            else:
                lo_dead = True
            continue
        x[i] = cand
        if i == 0:
            if x.any() and 0.0 < nd < best["d"]:
                best["d"] = nd
                best["x"] = x.copy()
        else:
            _svp_recurse(mu, bstar2, i - 1, x, nd, best)


def closest(mu, bstar2, center, radius2_init):
    """Near-optimal coefficient vectors for the closest point to `center`.

    Returns (ties, dist2): all visited vectors within a 1e-9 relative window
    of the optimum, and the optimal squared distance.
    """
    m = len(bstar2)
    state = {"d": radius2_init * (1 + 1e-12) + 1e-9, "pts": []}
    _cvp_recurse(mu, bstar2, center, m - 1, np.zeros(m, dtype=np.int64), 0.0,
                 state)
    if not state["pts"]:
        return [], float("inf")
    dmin = min(d for _, d in state["pts"])
    tol = 1e-9 * max(1.0, dmin) + 1e-12
    ties = [p for p, d in state["pts"] if d <= dmin + tol]
    return ties, dmin


def _cvp_recurse(mu, bstar2, center, i, x, acc, state):
    m = len(bstar2)
    s = center[i]
    for j in range(i + 1, m):
        s -= mu[j, i] * (x[j] - center[j])
    x0 = int(round(s))
    k = 0
    lo_dead = False
    hi_dead = False
    while not (lo_dead and hi_dead):
        cand = _zigzag(x0, k)
        k += 1
        side_hi = cand >= x0
        if (side_hi and hi_dead) or (not side_hi and lo_dead):
            continue
        diff = cand - s
        nd = acc + bstar2[i] * diff * diff
        if nd > state["d"]:
            if k == 1:
                return
            if side_hi:
                hi_dead = True
            else:
                lo_dead = True
            continue
        x[i] = cand
        if i == 0:
            state["pts"].append((x.copy(), nd))
            incumbent = nd + 1e-9 * max(1.0, nd) + 1e-12
            if incumbent < state["d"]:
                state["d"] = incumbent
        else:
            _cvp_recurse(mu, bstar2, center, i - 1, x, nd, state)
