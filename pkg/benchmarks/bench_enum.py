"""Benchmark the compiled enumeration kernel against the pure-Python
fallback on the workloads that dominate runtime: SVP on NTRU-style lattices
and shifted-point enumeration for decoders.

Run:  python3 benchmarks/bench_enum.py
"""

import time

import numpy as np

from gkplat import _enum_py, latalg
from gkplat.exactmat import ExactScaledMatrix
from gkplat.ntru import NtruParams, ntru_lattice

try:
    from gkplat import _enum_cy
except ImportError:
    _enum_cy = None


def ntru_instances(n, q, count, seed):
    params = NtruParams(n=n, q=q, p=3, d=max(1, n // 3))
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        h = [int(x) for x in rng.integers(-(q // 2), q - q // 2, n)]
        H, _ = ntru_lattice(h, params)
        from fractions import Fraction

        red, _ = latalg.lll(ExactScaledMatrix(H, Fraction(1)))
        B = red.to_numpy()
        out.append(B)
    return out


def bench_svp(kernel, bases):
    t0 = time.perf_counter()
    total = 0.0
    for B in bases:
        mu, b2 = kernel.gso(B)
        r2 = float(np.min(np.einsum("ij,ij->i", B, B)))
        _, d2 = kernel.shortest_nonzero(np.array(mu), np.array(b2), r2)
        total += d2
    return time.perf_counter() - t0, total


def bench_points(kernel, bases, radius_factor=3.0):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    count = 0
    for B in bases:
        mu, b2 = kernel.gso(B)
        center = rng.uniform(-0.5, 0.5, B.shape[0])
        r2 = float(np.min(b2)) * radius_factor
        coeffs, _ = kernel.enumerate_points(np.array(mu), np.array(b2),
                                            center, r2)
        count += len(coeffs)
    return time.perf_counter() - t0, count


def main():
    kernels = [("python", _enum_py)]
    if _enum_cy is not None:
        kernels.append(("cython", _enum_cy))
    for n, q, trials in ((6, 64, 20), (10, 64, 10), (12, 64, 10)):
        bases = ntru_instances(n, q, trials, seed=1)
        print(f"\nSVP on {trials} NTRU lattices, dim {2 * n}, q={q}:")
        ref = None
        for name, kernel in kernels:
            dt, chk = bench_svp(kernel, bases)
            note = ""
            if ref is not None:
                note = f"  ({ref / dt:.1f}x faster)" if dt < ref else ""
            else:
                ref = dt
            print(f"  {name:7s} {dt * 1000 / trials:9.2f} ms/instance "
                  f"(checksum {chk:.6f}){note}")
    bases = ntru_instances(8, 32, 10, seed=2)
    print(f"\npoint enumeration on {len(bases)} lattices, dim 16:")
    ref = None
    for name, kernel in kernels:
        dt, cnt = bench_points(kernel, bases)
        note = ""
        if ref is not None:
            note = f"  ({ref / dt:.1f}x faster)" if dt < ref else ""
        else:
            ref = dt
        print(f"  {name:7s} {dt * 1000 / len(bases):9.2f} ms/instance "
              f"({cnt} points){note}")


if __name__ == "__main__":
    main()
