"""NTRU ring arithmetic, key generation, encryption, q-symplectic NTRU
lattices, the derived GKP codes, and the randomized shortest-vector
experiments.

Ring elements live in Z_q[x]/Phi with Phi in {x^n - 1, x^n + 1}; coefficient
vectors use centered representatives in [-q/2, q/2) (the -q/2 endpoint is
included, +q/2 excluded).  Polynomial inversion uses extended Euclid over
GF(p)[x] for prime moduli and Hensel lifting for prime powers, combined by
CRT for composite q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionTooLarge,
    NotInvertible,
    SamplingExhausted,
    UnsupportedModulus,
)
from .exactmat import ExactScaledMatrix, IntMatrix
from .gkpcode import GkpCode, new_code
from .latalg import svp
from .symplectic import standard_J

XN_MINUS_1 = "x^n-1"
XN_PLUS_1 = "x^n+1"


@dataclass(frozen=True)
class NtruParams:
    n: int
    q: int
    p: int
    d: int
    phi: str = XN_MINUS_1

    def __post_init__(self):
        if self.phi not in (XN_MINUS_1, XN_PLUS_1):
            raise UnsupportedModulus(f"unsupported quotient {self.phi!r}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")
        if self.d > self.n // 2:
            raise ValueError("d must be at most n/2")


@dataclass
class NtruKey:
    f: list  # secret, exact small coefficients (f = 1 + p*f_tilde)
    g: list  # secret, exact small coefficients (g = p*g_tilde)
    h: list  # public, centered mod q
    params: NtruParams


def centered(x: int, q: int) -> int:
    return (x + q // 2) % q - q // 2


def centered_vec(v, q):
    return [centered(int(x), q) for x in v]


def ring_mul(a, b, params: NtruParams):
    """Product in Z[x]/Phi, coefficientwise centered mod q."""
    raw = ring_mul_z(a, b, params)
    return centered_vec(raw, params.q)


def ring_mul_z(a, b, params: NtruParams):
    """Product in Z[x]/Phi without modular reduction."""
    n = params.n
    conv = [0] * (2 * n)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                conv[i + j] += ai * bj
    sign = 1 if params.phi == XN_MINUS_1 else -1
    out = conv[:n]
    for i in range(n, 2 * n):
        out[i - n] += sign * conv[i]
    return out


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod_modp(num, den, p):
    num = [x % p for x in num]
    den = [x % p for x in den]
    _poly_trim(den)
    if not den:
        raise ZeroDivisionError
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(0, len(num) - len(den) + 1)
    rem = num[:]
    _poly_trim(rem)
    while len(rem) >= len(den):
        c = rem[-1] * inv_lead % p
        deg = len(rem) - len(den)
        quot[deg] = c
        for i, dc in enumerate(den):
            rem[deg + i] = (rem[deg + i] - c * dc) % p
        _poly_trim(rem)
    return quot, rem


def _invert_mod_prime(f, params: NtruParams, p: int):
    """Inverse of f in GF(p)[x]/Phi via extended Euclid, or NotInvertible."""
    n = params.n
    phi = [0] * (n + 1)
    phi[0] = -1 if params.phi == XN_MINUS_1 else 1
    phi[n] = 1
    a, b = phi[:], [x % p for x in f]
    # invariants: a = s*phi + t*f (s untracked), b = u*phi + v*f
    t, v = [0], [1]
    while True:
        _poly_trim(b)
        if not b:
            raise NotInvertible("polynomial shares a factor with the modulus")
        if len(b) == 1:
            inv = pow(b[0], p - 2, p)
            out = [c * inv % p for c in v]
            out += [0] * (n - len(out))
            return out[:n]
        quot, rem = _poly_divmod_modp(a, b, p)
        a, b = b, rem
        qv = _poly_mul_modp(quot, v, p)
        tv = [(x - y) % p for x, y in zip(t + [0] * len(qv), qv + [0] * len(t))]
        t, v = v, _poly_trim(tv)


def _poly_mul_modp(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def ring_invert(f, params: NtruParams):
    """Inverse of f in R_q, centered; NotInvertible when none exists."""
    q = params.q
    factors = _factorize(q)
    residues = []
    moduli = []
    for p, e in factors:
        g = _invert_mod_prime(f, params, p)
        pk = p
        # Hensel: g <- g*(2 - f*g) doubles the precision each round
        while pk < p ** e:
            pk = min(pk * pk, p ** e)
            fg = ring_mul_z(f, g, params)
            two_minus = [(-x) % pk for x in fg]
            two_minus[0] = (two_minus[0] + 2) % pk
            g = [x % pk for x in ring_mul_z(g, two_minus, params)]
        residues.append([x % p ** e for x in g])
        moduli.append(p ** e)
    out = []
    for i in range(params.n):
        out.append(_crt([r[i] for r in residues], moduli))
    res = centered_vec(out, q)
    check = ring_mul(f, res, params)
    if check != [1] + [0] * (params.n - 1):
        raise NotInvertible("inverse verification failed")
    return res


def _factorize(q: int):
    out = []
    m = q
    k = 2
    while k * k <= m:
        if m % k == 0:
            e = 0
            while m % k == 0:
                m //= k
                e += 1
            out.append((k, e))
        k += 1
    if m > 1:
        out.append((m, 1))
    return out


def _crt(residues, moduli):
    x = 0
    M = 1
    for m in moduli:
        M *= m
    for r, m in zip(residues, moduli):
        Mi = M // m
        x += r * Mi * pow(Mi, -1, m)
    return x % M


def sample_ternary(rng, n: int, plus: int, minus: int):
    """Uniform vector with exactly `plus` ones and `minus` minus-ones."""
    v = [1] * plus + [-1] * minus + [0] * (n - plus - minus)
    perm = rng.permutation(n)
    return [v[i] for i in perm]


def keygen(params: NtruParams, rng) -> NtruKey:
    """Sample (f, g, h) with f = 1 + p f~, g = p g~, h = g f^-1 in R_q."""
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    n, p, d = params.n, params.p, params.d
    for _ in range(10_000):
        ft = sample_ternary(rng, n, d, d)
        f = [1 + p * x if i == 0 else p * x for i, x in enumerate(ft)]
        try:
            finv = ring_invert(f, params)
        except NotInvertible:
            continue
        gt = sample_ternary(rng, n, d, d)
        g = [p * x for x in gt]
        h = ring_mul(g, finv, params)
        return NtruKey(f=f, g=g, h=h, params=params)
    raise SamplingExhausted("no invertible f found in 10^4 attempts")


def encrypt(h, m, r, params: NtruParams):
    """Ciphertext c = h r + m, centered mod q."""
    hr = ring_mul(h, r, params)
    return centered_vec([a + b for a, b in zip(hr, m)], params.q)


def decrypt(key: NtruKey, c):
    """m = (c f mod q) mod p; correct whenever g r + f m has small coeffs."""
    a = ring_mul(c, key.f, key.params)
    return centered_vec(a, key.params.p)


# ---------------------------------------------------------------------------
# lattices


def coeff_mirror(params: NtruParams) -> IntMatrix:
    """The signed permutation sigma_Phi with sigma C(h) symmetric."""
    n = params.n
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = 1
    sign = 1 if params.phi == XN_MINUS_1 else -1
    for i in range(1, n):
        rows[i][n - i] = sign
    return IntMatrix(rows)


def cyclic_matrix(h, params: NtruParams) -> IntMatrix:
    """C_Phi(h): row i holds the coefficients of x^i h mod Phi."""
    n = params.n
    row = list(h)
    rows = []
    sign = 1 if params.phi == XN_MINUS_1 else -1
    for _ in range(n):
        rows.append(row[:])
        row = [sign * row[-1]] + row[:-1]
    return IntMatrix(rows)


def ntru_lattice(h, params: NtruParams):
    """q-symplectic basis H = [[I, A(h)], [0, qI]] with A(h) = sigma C(h).

    Returns (H, certificate) where the certificate is the exact check
    H J H^T == q J.
    """
    n, q = params.n, params.q
    A = coeff_mirror(params) @ cyclic_matrix(h, params)
    if A != A.transpose():
        raise UnsupportedModulus("sigma C(h) failed to be symmetric")
    rows = []
    for i in range(n):
        rows.append([int(i == j) for j in range(n)] + list(A.rows[i]))
    for i in range(n):
        rows.append([0] * n + [q * int(i == j) for j in range(n)])
    H = IntMatrix(rows)
    J = standard_J(n)
    cert = (H @ J) @ H.transpose() == J.scale(q)
    return H, cert


def ntru_gkp_code(key_or_h, params: NtruParams, scale_d: int) -> GkpCode:
    """Scaled GKP code sqrt(scale_d / q) * L(H) with logical dimension
    scale_d^n."""
    h = key_or_h.h if isinstance(key_or_h, NtruKey) else key_or_h
    H, cert = ntru_lattice(h, params)
    if not cert:
        raise UnsupportedModulus("generator is not q-symplectic")
    code = new_code(ExactScaledMatrix(H, Fraction(scale_d, params.q)))
    assert code.logical_dim == scale_d ** params.n
    return code


def secret_key_vector(key: NtruKey):
    """The short lattice vector (sigma(f), g) in L(H)."""
    sigma = coeff_mirror(key.params)
    sf = sigma.matvec(key.f)
    return [int(x) for x in sf] + [int(x) for x in key.g]


def in_lattice(H: IntMatrix, v) -> bool:
    """Exact membership of an integer vector in the row lattice of H."""
    from .exactmat import invert_fraction

    inv = invert_fraction(H)
    m = H.shape[0]
    coeff = [
        sum(Fraction(v[i]) * inv[i][j] for i in range(m)) for j in range(m)
    ]
    return all(c.denominator == 1 for c in coeff)


# ---------------------------------------------------------------------------
# sampling experiments

MODES = ("random_h", "ntru_keyed", "invertible_h", "provable_xnplus1",
         "symmetric_block")


def sample_lambda1(params: NtruParams, trials: int, mode: str, seed: int):
    """Shortest-vector statistics over random NTRU-style lattices.

    Returns (rows, summary): one dict per trial with the measured lambda_1
    plus the Gaussian-heuristic reference sqrt(n q / pi e) and the
    sqrt(0.28 n) lower-bound line.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    n, q = params.n, params.q
    if 2 * n > 24:
        raise DimensionTooLarge("2n exceeds the enumeration limit")
    gh_ref = math.sqrt(n * q / (math.pi * math.e))
    qi_bound = math.sqrt(0.28 * n)
    rows = []
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        sk_norm = None
        if mode == "symmetric_block":
            X = _random_symmetric(rng, n, q)
            gen = []
            for i in range(n):
                gen.append([int(i == j) for j in range(n)] + list(X.rows[i]))
            for i in range(n):
                gen.append([0] * n + [q * int(i == j) for j in range(n)])
            H = IntMatrix(gen)
            J = standard_J(n)
            assert (H @ J) @ H.transpose() == J.scale(q)
        else:
            if mode == "random_h":
                h = [int(rng.integers(-(q // 2), q - q // 2)) for _ in range(n)]
            elif mode == "ntru_keyed":
                key = keygen(params, rng)
                h = key.h
                sk = secret_key_vector(key)
                sk_norm = math.sqrt(sum(x * x for x in sk))
            elif mode == "invertible_h":
                key = _keygen_invertible_h(params, rng)
                h = key.h
                sk = secret_key_vector(key)
                sk_norm = math.sqrt(sum(x * x for x in sk))
            else:  # provable_xnplus1
                key = _keygen_gaussian(params, rng)
                h = key.h
            H, cert = ntru_lattice(h, params)
            if not cert:
                raise UnsupportedModulus("certificate failed")
        M = ExactScaledMatrix(H, Fraction(1))
        _, lam = svp(M)
        row = {
            "n": n, "q": q, "d": params.d, "mode": mode, "trial": t,
            "lambda1": lam, "gh_ref": gh_ref, "qi_bound": qi_bound,
        }
        if sk_norm is not None:
            row["sk_norm"] = sk_norm
        rows.append(row)
    lams = [r["lambda1"] for r in rows]
    summary = {
        "mean": sum(lams) / len(lams),
        "min": min(lams),
        "max": max(lams),
        "gh_ref": gh_ref,
        "qi_bound": qi_bound,
    }
    return rows, summary


def _random_symmetric(rng, n, q):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = int(rng.integers(-(q // 2), q - q // 2))
            rows[i][j] = v
            rows[j][i] = v
    return IntMatrix(rows)


def _keygen_invertible_h(params: NtruParams, rng) -> NtruKey:
    """Keygen variant with g ~ p D(d+1, d) and invertible public key."""
    n, p, d = params.n, params.p, params.d
    for _ in range(10_000):
        ft = sample_ternary(rng, n, d, d)
        f = [1 + p * x if i == 0 else p * x for i, x in enumerate(ft)]
        try:
            finv = ring_invert(f, params)
        except NotInvertible:
            continue
        gt = sample_ternary(rng, n, d + 1, d)
        g = [p * x for x in gt]
        h = ring_mul(g, finv, params)
        try:
            ring_invert(h, params)
        except NotInvertible:
            continue
        return NtruKey(f=f, g=g, h=h, params=params)
    raise SamplingExhausted("no invertible (f, h) pair found in 10^4 attempts")


def _keygen_gaussian(params: NtruParams, rng) -> NtruKey:
    """Provable-variant keygen: Phi = x^n + 1, n a power of two >= 8, f and g
    from a discrete Gaussian of standard deviation sqrt(q)."""
    n = params.n
    if params.phi != XN_PLUS_1:
        raise UnsupportedModulus("provable mode needs Phi = x^n + 1")
    if n < 8 or n & (n - 1):
        raise ValueError("provable mode needs n a power of two >= 8")
    sigma = math.sqrt(params.q)
    for _ in range(10_000):
        f = [discrete_gaussian(rng, sigma) for _ in range(n)]
        try:
            finv = ring_invert(f, params)
        except NotInvertible:
            continue
        g = [discrete_gaussian(rng, sigma) for _ in range(n)]
        h = ring_mul(g, finv, params)
        return NtruKey(f=f, g=g, h=h, params=params)
    raise SamplingExhausted("no invertible f found in 10^4 attempts")


_DG_CACHE: dict = {}


def _dg_cell_log(x: int, sigma: float) -> float:
    """log of the rounding-cell mass P(round(y) = x) for y ~ N(0, sigma^2);
    erfc keeps precision in the far tail."""
    s2 = sigma * math.sqrt(2.0)
    lo = (abs(x) - 0.5) / s2
    hi = (abs(x) + 0.5) / s2
    mass = 0.5 * (math.erfc(lo) - math.erfc(hi))
    if mass <= 0.0:
        return -math.inf
    return math.log(mass)


def _dg_log_envelope(sigma: float):
    """log of max_x rho(x)/cell(x) over the truncated support, cached."""
    key = round(sigma, 12)
    if key not in _DG_CACHE:
        T = int(math.ceil(10 * sigma)) + 1
        logm = max(
            -(x * x) / (2 * sigma * sigma) - _dg_cell_log(x, sigma)
            for x in range(0, T + 1)
            if _dg_cell_log(x, sigma) > -math.inf
        )
        _DG_CACHE[key] = (T, logm)
    return _DG_CACHE[key]


def discrete_gaussian(rng, sigma: float) -> int:
    """Discrete Gaussian on Z, rejection-sampled from a rounded continuous
    Gaussian: propose x = round(y) with y ~ N(0, sigma^2), accept with
    probability rho(x) / (M * cell_mass(x))."""
    T, logm = _dg_log_envelope(sigma)
    while True:
        y = rng.normal(0.0, sigma)
        x = int(round(y))
        if abs(x) > T:
            continue
        log_a = -(x * x) / (2 * sigma * sigma) - _dg_cell_log(x, sigma) - logm
        if rng.random() < math.exp(log_a):
            return x
