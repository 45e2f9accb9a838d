"""Decoders for GKP codes under Gaussian displacement noise: syndromes and
pure errors, minimum-energy (CVP) and maximum-likelihood (coset theta)
decoding, two-stage concatenated decoding, NTRU trapdoor decoding,
Monte-Carlo benchmarking, and the private-channel round trip.

Syndrome components are centered in [-1/2, 1/2).  A decoder's `correction`
is its estimate of the applied error; the logical failure criterion is a
nontrivial class of (true error - correction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import enumkernel, latalg
from .errors import (
    DecryptionFailure,
    DimensionTooLarge,
    NoTrivialSublattice,
    NotInDual,
    NotInvertible,
    TailNotConverged,
)
from .exactmat import invert_fraction
from .gkpcode import GkpCode, logical_basis, reduce_label
from .ntru import (
    NtruKey,
    centered_vec,
    coeff_mirror,
    cyclic_matrix,
    decrypt,
    ring_invert,
    ring_mul,
    ring_mul_z,
)
from .symplectic import standard_J_numpy


@dataclass
class NoiseModel:
    """Isotropic Gaussian displacement channel with variance sigma_tilde^2."""

    sigma_tilde: float

    def __post_init__(self):
        if self.sigma_tilde <= 0:
            raise ValueError("sigma_tilde must be positive")

    def sample(self, rng, dim: int) -> np.ndarray:
        return self.sigma_tilde * rng.standard_normal(dim)


@dataclass
class DecodeOutcome:
    correction: np.ndarray
    logical_class: tuple
    coset_weights: dict | None = None


def _centered_mod1(v: np.ndarray) -> np.ndarray:
    return (v + 0.5) % 1.0 - 0.5


def syndrome(code: GkpCode, e) -> np.ndarray:
    """s(e) = M J e mod 1, componentwise centered."""
    M = code.generator_numpy()
    J = standard_J_numpy(code.n)
    return _centered_mod1(M @ J @ np.asarray(e, dtype=float))


def pure_error(code: GkpCode, s) -> np.ndarray:
    """eta(s) = (M J)^-1 s: the canonical error with syndrome s."""
    M = code.generator_numpy()
    J = standard_J_numpy(code.n)
    return np.linalg.solve(M @ J, np.asarray(s, dtype=float))


def logical_class(code: GkpCode, residual) -> tuple:
    """Label of a dual-lattice vector modulo (D, D).

    Coefficients are taken in the canonical dual basis and must be integral
    within 1e-7 (NotInDual otherwise).
    """
    lb = logical_basis(code)
    basis = np.vstack([lb.e, lb.f])
    a = np.linalg.solve(basis.T, np.asarray(residual, dtype=float))
    ai = np.rint(a)
    if np.max(np.abs(a - ai)) > 1e-7:
        raise NotInDual("residual is not in the dual lattice")
    return reduce_label(code, [int(x) for x in ai])


# ---------------------------------------------------------------------------
# MED


def _dual_reduction(code: GkpCode):
    if "dual_reduction" not in code._cache:
        code._cache["dual_reduction"] = latalg._reduce(code.dual_generator())
    return code._cache["dual_reduction"]


def med_decode(code: GkpCode, s) -> DecodeOutcome:
    """Minimum-energy decoding: correction = eta - CVP(eta, L_dual)."""
    if 2 * code.n > latalg.MAX_ENUM_DIM:
        raise DimensionTooLarge("dimension exceeds the enumeration limit")
    eta = pure_error(code, s)
    red = _dual_reduction(code)
    ties, _ = latalg.closest_coeffs(red, eta)
    cand = sorted(tuple(red.input_coeffs(x)) for x in ties)
    c = np.asarray(cand[0], dtype=float) @ latalg._float_basis(red.source)
    correction = eta - c
    return DecodeOutcome(correction=correction,
                         logical_class=logical_class(code, -c))


# ---------------------------------------------------------------------------
# MLD


def _direct_reduction(code: GkpCode):
    if "direct_reduction" not in code._cache:
        code._cache["direct_reduction"] = latalg._reduce(code.generator)
    return code._cache["direct_reduction"]


def _shifted_gaussian_log_mass(red, shift: np.ndarray, sigma: float,
                               tail_eps: float) -> float:
    """log of sum over lattice points xi of exp(-||xi + shift||^2/(2 s^2)).

    Works in log space (referenced to the closest point) so small sigma
    never underflows; the enumeration radius grows until the Gaussian tail
    is below tail_eps relatively.
    """
    center = np.linalg.solve(red.B.T, -shift)
    xb = np.asarray(latalg._babai_coeffs(red.mu, red.b2, center),
                    dtype=np.int64)
    center = center - xb
    # Babai distance upper-bounds the true closest distance: a safe radius
    d_babai = math.sqrt(float(np.sum((center @ red.B) ** 2)))
    m = len(red.b2)
    extra = sigma * (2.0 * math.sqrt(max(math.log(2.0 / tail_eps), 1.0))
                     + math.sqrt(2.0 * m))
    R = d_babai + extra
    prev = None
    for _ in range(6):
        _, d2s = enumkernel.enumerate_points(red.mu, red.b2, center, R * R)
        dmin = float(np.min(d2s))
        rel = np.exp(-(np.asarray(d2s) - dmin) / (2 * sigma * sigma))
        w = float(np.sum(rel))
        if prev is not None and abs(w - prev[1]) <= 10 * tail_eps * max(w, 1e-300) \
                and dmin == prev[0]:
            return -dmin / (2 * sigma * sigma) + math.log(w)
        prev = (dmin, w)
        R += 2 * sigma
    raise TailNotConverged("shifted theta mass did not stabilize")


def mld_decode(code: GkpCode, s, noise: NoiseModel,
               tail_eps: float = 1e-10) -> DecodeOutcome:
    """Maximum-likelihood decoding via coset theta weights.

    Weight of label l is the Gaussian mass of L + eta + v_l at the channel
    variance; the argmax label (lexicographic tie-break) is applied.
    """
    if 2 * code.n > latalg.MAX_ENUM_DIM:
        raise DimensionTooLarge("dimension exceeds the enumeration limit")
    if code.logical_dim ** 2 > 4096:
        raise DimensionTooLarge("too many cosets for MLD")
    eta = pure_error(code, s)
    lb = logical_basis(code)
    red = _direct_reduction(code)
    sigma = noise.sigma_tilde
    n = code.n
    labels = []
    _enumerate_labels(code.code_type, n, labels)
    logw = {}
    for label in labels:
        shift = eta + lb.label_vector(label)
        logw[label] = _shifted_gaussian_log_mass(red, shift, sigma, tail_eps)
    ref = max(logw.values())
    rel = {k: math.exp(v - ref) for k, v in logw.items()}
    total = sum(rel.values())
    norm = {k: v / total for k, v in rel.items()}
    best = max(sorted(norm), key=lambda k: norm[k])
    correction = eta + lb.label_vector(best)
    return DecodeOutcome(correction=correction, logical_class=best,
                         coset_weights=norm)


def _enumerate_labels(code_type, n, out, prefix=()):
    if len(prefix) == 2 * n:
        out.append(tuple(prefix))
        return
    d = code_type[len(prefix) % n]
    for v in range(d):
        _enumerate_labels(code_type, n, out, prefix + (v,))


# ---------------------------------------------------------------------------
# concatenated two-stage decoding


def _trivial_coeff_rows(code: GkpCode, inner_scale_sq) -> np.ndarray:
    """Integer rows T with T M = sqrt(inner_scale_sq) I (the trivial
    sublattice expressed in the code basis); NoTrivialSublattice if absent."""
    key = ("trivial", inner_scale_sq)
    if key in code._cache:
        return code._cache[key]
    if code.exact:
        c = Fraction(inner_scale_sq)
        Minv = invert_fraction(code.generator.base)
        ratio = c / code.generator.scale_sq
        scale = _fraction_sqrt_or_none(ratio)
        if scale is None:
            raise NoTrivialSublattice("inner scale is incommensurate")
        rows = []
        m = 2 * code.n
        for i in range(m):
            row = []
            for j in range(m):
                v = scale * Minv[i][j]
                if v.denominator != 1:
                    raise NoTrivialSublattice(
                        "code does not contain the stated trivial sublattice"
                    )
                row.append(int(v))
            rows.append(row)
        T = np.array(rows, dtype=float)
    else:
        M = code.generator_numpy()
        T = math.sqrt(float(inner_scale_sq)) * np.linalg.inv(M)
        if np.max(np.abs(T - np.rint(T))) > 1e-7:
            raise NoTrivialSublattice(
                "code does not contain the stated trivial sublattice"
            )
        T = np.rint(T)
    code._cache[key] = T
    return T


def _fraction_sqrt_or_none(x: Fraction):
    from .exactmat import _fraction_sqrt

    return _fraction_sqrt(x)


def trivial_stage(code: GkpCode, s, inner_scale_sq):
    """Componentwise rounding onto the trivial dual grid.

    Returns (eta1, s_res): the stage-1 correction and the residual syndrome.
    """
    T = _trivial_coeff_rows(code, inner_scale_sq)
    s = np.asarray(s, dtype=float)
    c = math.sqrt(float(inner_scale_sq))
    J = standard_J_numpy(code.n)
    # syndrome of the trivial generators: rows T of M give T s mod 1
    s_triv = _centered_mod1(T @ s)
    eta1 = np.linalg.solve(c * J, s_triv)
    s_res = _centered_mod1(s - syndrome(code, eta1))
    return eta1, s_res


def concat_decode(code: GkpCode, s, inner_scale_sq) -> DecodeOutcome:
    """Two-stage decoder: trivial-grid rounding, then the outer step.

    For Construction A codes (binary code attached by the builder) the outer
    step is exact soft-decision decoding over the dual binary code; otherwise
    exact CVP runs on the residual.
    """
    eta1, s_res = trivial_stage(code, s, inner_scale_sq)
    Q = code._cache.get("binary_code")
    if Q is not None:
        eta = pure_error(code, s)
        c = _cvp_construction_a(code, Q, eta)
        correction = eta - c
        return DecodeOutcome(correction=correction,
                             logical_class=logical_class(code, -c))
    out = med_decode(code, s_res)
    correction = eta1 + out.correction
    return DecodeOutcome(correction=correction, logical_class=out.logical_class)


def _dual_binary_code(Q):
    """Generator rows of the symplectic-dual binary code of Q."""
    n2 = 2 * Q.n
    n = Q.n
    rows = Q.generators.rows
    # GF(2) nullspace of the symplectic products
    sys_rows = []
    for q in rows:
        sys_rows.append([(q[(j + n) % n2]) % 2 for j in range(n2)])
    basis = _gf2_nullspace(sys_rows, n2)
    return basis


def _gf2_nullspace(rows, ncols):
    a = [sum((r[j] & 1) << j for j in range(ncols)) for r in rows]
    pivots = []
    red = []
    for v in a:
        for pc, pv in zip(pivots, red):
            if (v >> pc) & 1:
                v ^= pv
        if v:
            pc = (v & -v).bit_length() - 1
            # clear this column from earlier pivot rows (full Gauss-Jordan)
            red = [pv ^ v if (pv >> pc) & 1 else pv for pv in red]
            pivots.append(pc)
            red.append(v)
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for fj in free:
        vec = [0] * ncols
        vec[fj] = 1
        for pc, pv in zip(pivots, red):
            s = 0
            for j in free:
                if (pv >> j) & 1:
                    s ^= vec[j]
            vec[pc] = s
        out.append(vec)
    return out


def _cvp_construction_a(code: GkpCode, Q, target: np.ndarray) -> np.ndarray:
    """Exact CVP onto L_dual for a Construction A code: minimize over dual
    codewords with per-component rounding onto (c + 2 Z)/sqrt(2)."""
    duals = _dual_binary_code(Q)
    k = len(duals)
    if k > 20:
        raise DimensionTooLarge("dual binary code too large to enumerate")
    t = np.asarray(target, dtype=float) * math.sqrt(2.0)
    best = None
    for mask in range(1 << k):
        w = np.zeros(2 * Q.n, dtype=int)
        mm = mask
        idx = 0
        while mm:
            if mm & 1:
                w ^= np.array(duals[idx], dtype=int)
            mm >>= 1
            idx += 1
        y = w + 2.0 * np.rint((t - w) / 2.0)
        d2 = float(np.sum((t - y) ** 2))
        if best is None or d2 < best[0] - 1e-12:
            best = (d2, y)
    return best[1] / math.sqrt(2.0)


# ---------------------------------------------------------------------------
# NTRU trapdoor decoding


def ntru_trapdoor_decode(code: GkpCode, key: NtruKey, s,
                         fallback: bool = True) -> DecodeOutcome:
    """Decode an NTRU-GKP code by decrypting the residual syndrome.

    After the trivial stage the residual error is (u, v)/sqrt(d q) with the
    first syndrome block q s1 = v - A(h) u mod q, an NTRU ciphertext with
    message v and randomness sigma(-u).  Success is certified against the
    secret key's smallness condition; on failure either DecryptionFailure is
    raised or (fallback=True) MED decoding takes over.
    """
    params = key.params
    n, q = params.n, params.q
    scale_d = code.logical_dim ** (1 / n)
    d = int(round(scale_d))
    inner = d * q
    eta1, s_res = trivial_stage(code, s, inner)
    w = np.rint(q * np.asarray(s_res[:n], dtype=float)).astype(int)
    w = centered_vec(w, q)
    try:
        u, v = _recover_uv(key, w, math.sqrt(inner) * eta1[:n])
    except DecryptionFailure:
        if fallback and 2 * code.n <= latalg.MAX_ENUM_DIM:
            out = med_decode(code, s)
            return out
        raise
    resid = np.concatenate([np.asarray(u, dtype=float),
                            np.asarray(v, dtype=float)]) / math.sqrt(inner)
    correction = eta1 + resid
    # the believed correction differs from the pure error by a dual vector
    eta = pure_error(code, s)
    label = logical_class(code, correction - eta)
    return DecodeOutcome(correction=correction, logical_class=label)


def _recover_uv(key: NtruKey, w, offset_u=None):
    """Invert the residual-syndrome ciphertext w = v - A(h) u mod q.

    v comes from NTRU decryption; u solves A(h) u = v - w mod q.  When the
    public key is invertible the solution is sigma(h^-1 (v - w)); otherwise
    the system is solved exactly over the integers and the likeliest coset
    representative is chosen -- including the sub-cell offset of the trivial
    stage (`offset_u`), which breaks exact norm ties the way a full ML
    decoder would.
    """
    params = key.params
    q = params.q
    v = decrypt(key, list(w))
    a = ring_mul(list(w), key.f, params)
    sigma = coeff_mirror(params)
    diff = centered_vec([int(vi) - int(wi) for vi, wi in zip(v, w)], q)
    try:
        hinv = ring_invert(key.h, params)
        su = ring_mul(hinv, diff, params)
        u = centered_vec(sigma.matvec(su), q)
    except NotInvertible:
        A_h = sigma @ cyclic_matrix(key.h, params)
        u0, kernel = _solve_mod_q(A_h, q, diff)
        if u0 is None:
            raise DecryptionFailure("residual system is inconsistent")
        target = -np.asarray(u0, dtype=float)
        if offset_u is not None:
            target = target - np.asarray(offset_u, dtype=float)
        closest, _ = latalg.cvp(np.array(kernel, dtype=float), target)
        u = [int(a_) + int(round(k)) for a_, k in zip(u0, closest)]
    # certificate: w as ciphertext carries message v with randomness
    # r = sigma(-u); f*w must equal g*r + f*v exactly over Z, i.e. the
    # decryption saw no mod-q wraparound
    r = [-int(x) for x in sigma.matvec(u)]
    z = ring_mul_z(key.g, r, params)
    fm = ring_mul_z(key.f, v, params)
    exact = [zi + fj for zi, fj in zip(z, fm)]
    if exact != a:
        raise DecryptionFailure("smallness certificate failed")
    return u, v


def _solve_mod_q(A, q: int, target):
    """Solve u^T A = target^T mod q over the integers.

    Returns (u0, kernel): a particular solution (or None when inconsistent)
    and a basis of the kernel lattice {x : x^T A = 0 mod q}, which contains
    q Z^n.
    """
    from .exactmat import IntMatrix, hnf

    n = A.shape[0]
    stack = IntMatrix(
        [row[:] for row in A.rows]
        + [[q * int(i == j) for j in range(n)] for i in range(n)]
    )
    H, U = hnf(stack)
    t = [int(x) for x in target]
    coeff = [0] * (2 * n)
    kernel = []
    for i in range(2 * n):
        row = H.rows[i]
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None:
            # zero row of H: the transform row's first block kills A mod q
            kernel.append(U.rows[i][:n])
            continue
        c = t[piv] // row[piv]
        coeff[i] = c
        t = [a - c * b for a, b in zip(t, row)]
    if any(x != 0 for x in t):
        return None, kernel
    full = [
        sum(coeff[i] * U.rows[i][j] for i in range(2 * n)) for j in range(2 * n)
    ]
    return full[:n], kernel


# ---------------------------------------------------------------------------
# Monte-Carlo benchmarking


def wilson_interval(failures: int, trials: int, z: float = 1.959964):
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = failures / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials ** 2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


DECODERS = ("med", "mld", "concat", "ntru")


def monte_carlo(code: GkpCode, decoder: str, noise: NoiseModel, trials: int,
                seed: int, key: NtruKey | None = None,
                inner_scale_sq=None) -> dict:
    """Empirical logical-failure rate of a decoder under the Gaussian
    displacement channel; deterministic under the seed (per-trial derived
    streams)."""
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    dim = 2 * code.n
    failures = 0
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        e = noise.sample(rng, dim)
        s = syndrome(code, e)
        out = _dispatch(code, decoder, s, noise, key, inner_scale_sq)
        resid = e - out.correction
        if any(x != 0 for x in logical_class(code, resid)):
            failures += 1
    lo, hi = wilson_interval(failures, trials)
    return {
        "decoder": decoder,
        "sigma": noise.sigma_tilde,
        "trials": trials,
        "failures": failures,
        "rate": failures / trials,
        "ci_lo": lo,
        "ci_hi": hi,
        "seed": seed,
    }


def _dispatch(code, decoder, s, noise, key, inner_scale_sq):
    if decoder == "med":
        return med_decode(code, s)
    if decoder == "mld":
        return mld_decode(code, s, noise)
    if decoder == "concat":
        if inner_scale_sq is None:
            inner_scale_sq = 2
        return concat_decode(code, s, inner_scale_sq)
    if key is None:
        raise ValueError("ntru decoder needs the secret key")
    return ntru_trapdoor_decode(code, key, s)


# ---------------------------------------------------------------------------
# private channel


def private_channel_demo(params, message_bits, seed: int) -> dict:
    """Round trip of the NTRU public-key quantum channel.

    Alice samples a key pair (with invertible public key), Bob encodes the
    message bits as the displacement (-r, m)/sqrt(d q), Alice trapdoor
    decodes; the eavesdropper path applies only the generic correction and
    its residual's f-sector label reveals the randomness r mod d.
    """
    from .ntru import _keygen_invertible_h, ntru_gkp_code

    rng = np.random.default_rng(int(seed))
    key = _keygen_invertible_h(params, rng)
    d = 2
    code = ntru_gkp_code(key, params, d)
    n, q = params.n, params.q
    m_poly = [int(b) % 2 for b in message_bits[: n]]
    m_poly += [0] * (n - len(m_poly))
    r = [int(x) for x in rng.integers(-1, 2, n)]
    e0 = np.concatenate([-np.asarray(r, dtype=float),
                         np.asarray(m_poly, dtype=float)]) / math.sqrt(d * q)
    s = syndrome(code, e0)
    out = ntru_trapdoor_decode(code, key, s, fallback=False)
    exact = bool(np.max(np.abs(out.correction - e0)) < 1e-9)

    # adversary: generic correction only.  The dual-basis symplectic products
    # M_dual J (e0 - eta) are defined mod 1 (stabilizer freedom appears as
    # integer shifts); in our row/J conventions the randomness sector reads
    # -r/d on the first block, so r mod d leaks from the residual.
    eta = pure_error(code, s)
    resid = e0 - eta
    Mperp = code.dual_generator_numpy()
    J = standard_J_numpy(n)
    phases = Mperp @ J @ resid
    leak = np.rint(-d * phases[:n]).astype(int) % d
    r_mod_d = tuple(x % d for x in r)
    return {
        "params": {"n": n, "q": q, "p": params.p, "d": params.d,
                   "phi": params.phi},
        "public_key": key.h,
        "message": m_poly,
        "randomness": r,
        "syndrome": [float(x) for x in s],
        "alice_exact_recovery": exact,
        "adversary_r_leak": [int(x) for x in leak],
        "randomness_mod_d": list(r_mod_d),
        "leak_matches_r": bool(tuple(leak) == r_mod_d),
        "seed": seed,
    }
