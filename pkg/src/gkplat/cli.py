"""Command-line front end.

Subcommands: code-info, construct, ntru-sample, ntru-keygen, decode-bench,
channel-demo, clifford-synth, clifford-rademacher, tau-reduce, theta,
floquet-spectrum, wigner.  Every randomized command takes --seed and is
byte-reproducible; per-trial streams derive as default_rng([seed, trial]).
Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 numerical
non-convergence.

--threads caps the parallelism of the numeric backends (set before heavy
imports); the default of 1 keeps results schedule-independent.  All kernels
here are single-threaded, so the flag is a cap, not a request.
"""

from __future__ import annotations

import argparse
import json
import os
import sys


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    from .errors import GkplatError, NotConverged, ParseError, TailNotConverged

    try:
        return args.func(args)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotConverged, TailNotConverged) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GkplatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser():
    p = argparse.ArgumentParser(
        prog="gkplat",
        description="Lattice coding tools for GKP codes.  Seeds are 64-bit; "
                    "randomized commands derive the stream for trial t as "
                    "numpy.random.default_rng([seed, t]), so runs are "
                    "byte-reproducible and schedule-independent.",
    )
    p.add_argument("--threads", type=int, default=1,
                   help="cap numeric-backend threads (default 1)")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("code-info", help="summarize a lattice file as a code")
    q.add_argument("lattice_file")
    q.add_argument("--out")
    q.set_defaults(func=cmd_code_info)

    q = sub.add_parser("construct", help="write a named lattice file")
    q.add_argument("name", help="square | d4 | e8 | hamming8 | stab:<file>")
    q.add_argument("--scale", type=int, default=2,
                   help="scaling d for the square code (default 2)")
    q.add_argument("--out")
    q.set_defaults(func=cmd_construct)

    q = sub.add_parser("theta", help="theta series of a lattice file")
    q.add_argument("lattice_file")
    q.add_argument("--radius-sq", type=float, default=8.0)
    q.add_argument("--out")
    q.set_defaults(func=cmd_theta)

    q = sub.add_parser("ntru-keygen", help="sample an NTRU key pair")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--p", type=int, default=3)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--phi", default="x^n-1", choices=["x^n-1", "x^n+1"])
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_ntru_keygen)

    q = sub.add_parser("ntru-sample", help="shortest-vector statistics")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--p", type=int, default=3)
    q.add_argument("--d", type=int, default=0,
                   help="ternary weight (default floor(n/3))")
    q.add_argument("--mode", default="random_h",
                   choices=["random_h", "ntru_keyed", "invertible_h",
                            "provable_xnplus1", "symmetric_block"])
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_ntru_sample)

    q = sub.add_parser("decode-bench", help="Monte-Carlo decoder benchmark")
    q.add_argument("lattice_file", nargs="?",
                   help="lattice file; omit when --key builds an NTRU code")
    q.add_argument("--decoder", default="med",
                   choices=["med", "mld", "concat", "ntru"])
    q.add_argument("--key", help="NTRU key JSON (enables the ntru decoder)")
    q.add_argument("--scale-d", type=int, default=2,
                   help="logical scaling d for a --key-built code")
    q.add_argument("--sigma", type=float, nargs="+", required=True)
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--inner-scale-sq", type=float, default=2.0)
    q.add_argument("--out")
    q.set_defaults(func=cmd_decode_bench)

    q = sub.add_parser("channel-demo", help="NTRU private-channel round trip")
    q.add_argument("--n", type=int, default=11)
    q.add_argument("--q", type=int, default=128)
    q.add_argument("--p", type=int, default=3)
    q.add_argument("--d", type=int, default=3)
    q.add_argument("--message", default="1011")
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_channel_demo)

    q = sub.add_parser("clifford-synth", help="decompose Sp_2n(Z_d) elements")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--matrix", help="JSON 2n x 2n matrix; random if omitted")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")
    q.set_defaults(func=cmd_clifford_synth)

    q = sub.add_parser("clifford-rademacher", help="psi of an SL2(Z) matrix")
    q.add_argument("matrix", help='JSON like "[[2,1],[1,1]]"')
    q.add_argument("--out")
    q.set_defaults(func=cmd_clifford_rademacher)

    q = sub.add_parser("tau-reduce", help="reduce tau to the fundamental domain")
    q.add_argument("tau", help="complex number like 0.3+0.1j")
    q.add_argument("--out")
    q.set_defaults(func=cmd_tau_reduce)

    q = sub.add_parser("floquet-spectrum", help="twirl spectra and squeezing")
    q.add_argument("--level", type=int, nargs=2, default=[1, 15],
                   metavar=("NMIN", "NMAX"))
    q.add_argument("--cutoff", type=int, default=120)
    q.add_argument("--out")
    q.set_defaults(func=cmd_floquet_spectrum)

    q = sub.add_parser("wigner", help="Wigner CSV of a twirl ground state")
    q.add_argument("--level", type=int, default=8)
    q.add_argument("--cutoff", type=int, default=120)
    q.add_argument("--grid", type=int, default=41)
    q.add_argument("--half-width", type=float, default=3.5)
    q.add_argument("--out")
    q.set_defaults(func=cmd_wigner)

    return p


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------


def cmd_code_info(args) -> int:
    from . import io as gio
    from . import latalg
    from .gkpcode import code_summary, new_code

    with open(args.lattice_file) as fh:
        M = gio.parse_lattice(fh.read())
    code = new_code(M)
    summary = code_summary(code)
    if code.logical_dim > 1:
        summary["distance"] = latalg.gkp_distance(code)
    vec, lam1 = latalg.svp(M)
    summary["lambda1"] = lam1
    theta = latalg.theta_series(M, max(4.0, 2.0 * lam1 * lam1))
    summary["kissing_number"] = next(
        (cnt for d2, cnt in theta.entries if float(d2) > 1e-12), 0
    )
    summary["theta_head"] = [[float(d2), cnt] for d2, cnt in theta.entries[:6]]
    _emit(args, json.dumps(summary, indent=2, default=float) + "\n")
    return 0


def cmd_construct(args) -> int:
    from fractions import Fraction

    from . import io as gio
    from .constructions import (
        BinarySymplecticCode,
        HAMMING8_ROWS,
        construction_a,
        named_lattice,
    )
    from .exactmat import ExactScaledMatrix, IntMatrix

    name = args.name.lower()
    if name == "square":
        M = ExactScaledMatrix(IntMatrix.identity(2), Fraction(args.scale))
    elif name in ("d4", "e8"):
        M = named_lattice(name)
    elif name == "hamming8":
        M = construction_a(BinarySymplecticCode(IntMatrix(HAMMING8_ROWS))).generator
    elif name.startswith("stab:"):
        with open(name[5:]) as fh:
            Q = gio.parse_stabilizer_code(fh.read())
        M = construction_a(Q).generator
    else:
        print(f"error: unknown construction {args.name!r}", file=sys.stderr)
        return 1
    _emit(args, gio.write_lattice(M))
    return 0


def cmd_theta(args) -> int:
    from . import io as gio
    from . import latalg

    with open(args.lattice_file) as fh:
        M = gio.parse_lattice(fh.read())
    theta = latalg.theta_series(M, args.radius_sq)
    _emit(args, gio.theta_csv(theta))
    return 0


def cmd_ntru_keygen(args) -> int:
    from . import io as gio
    from .ntru import NtruParams, keygen

    params = NtruParams(n=args.n, q=args.q, p=args.p, d=args.d, phi=args.phi)
    key = keygen(params, args.seed)
    _emit(args, json.dumps(gio.key_json_dict(key), indent=2) + "\n")
    return 0


def cmd_ntru_sample(args) -> int:
    from . import io as gio
    from .ntru import NtruParams, sample_lambda1

    d = args.d if args.d else max(1, args.n // 3)
    params = NtruParams(n=args.n, q=args.q, p=args.p, d=d)
    rows, _ = sample_lambda1(params, args.trials, args.mode, args.seed)
    _emit(args, gio.ntru_csv(rows))
    return 0


def cmd_decode_bench(args) -> int:
    from . import io as gio
    from .decode import NoiseModel, monte_carlo
    from .gkpcode import new_code

    key = None
    if args.key:
        from .ntru import NtruKey, NtruParams, ntru_gkp_code

        with open(args.key) as fh:
            data = json.load(fh)
        params = NtruParams(n=data["n"], q=data["q"], p=data["p"],
                            d=data["d"], phi=data["phi"])
        key = NtruKey(f=data["f"], g=data["g"], h=data["h"], params=params)
        code = ntru_gkp_code(key, params, args.scale_d)
        name = args.key
    elif args.lattice_file:
        with open(args.lattice_file) as fh:
            M = gio.parse_lattice(fh.read())
        code = new_code(M)
        name = args.lattice_file
    else:
        print("error: need a lattice file or --key", file=sys.stderr)
        return 1
    if args.decoder == "ntru" and key is None:
        print("error: the ntru decoder needs --key", file=sys.stderr)
        return 1
    reports = []
    for sigma in args.sigma:
        reports.append(
            monte_carlo(code, args.decoder, NoiseModel(sigma), args.trials,
                        args.seed, key=key,
                        inner_scale_sq=args.inner_scale_sq)
        )
    _emit(args, gio.bench_csv(reports, code_name=name))
    return 0


def cmd_channel_demo(args) -> int:
    from .decode import private_channel_demo
    from .ntru import NtruParams

    params = NtruParams(n=args.n, q=args.q, p=args.p, d=args.d)
    bits = [int(c) for c in args.message if c in "01"]
    transcript = private_channel_demo(params, bits, args.seed)
    _emit(args, json.dumps(transcript, indent=2, default=float) + "\n")
    return 0


def cmd_clifford_synth(args) -> int:
    import numpy as np

    from .clifford import random_symplectic_mod, synthesize

    if args.matrix:
        S = np.array(json.loads(args.matrix), dtype=np.int64)
    else:
        S = random_symplectic_mod(args.n, args.d,
                                  np.random.default_rng(args.seed))
    word = synthesize(S, args.n, args.d)
    out = {
        "n": args.n,
        "d": args.d,
        "matrix": S.tolist(),
        "word": str(word),
        "length": word.length(),
    }
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_clifford_rademacher(args) -> int:
    from .clifford import rademacher

    A = json.loads(args.matrix)
    res = rademacher(A)
    word = "".join(f"{k}^{e}" if e != 1 else k for k, e in res.word)
    _emit(args, f"psi={res.psi} word={word}\n")
    return 0


def cmd_tau_reduce(args) -> int:
    from .clifford import reduce_to_fundamental_domain

    tau = complex(args.tau)
    z, word = reduce_to_fundamental_domain(tau)
    steps = " ".join(f"{k}^{e}" if (k, e) != ("S", 1) else "S" for k, e in word)
    _emit(args, f"tau={z.real:.17g}{z.imag:+.17g}j word={steps}\n")
    return 0


def cmd_floquet_spectrum(args) -> int:
    from . import io as gio
    from .floquet import spectrum_and_squeezing

    lo, hi = args.level
    result = spectrum_and_squeezing(range(lo, hi + 1), cutoff=args.cutoff)
    _emit(args, gio.spectrum_csv(result))
    return 0


def cmd_wigner(args) -> int:
    import numpy as np

    from . import io as gio
    from .floquet import average_hamiltonian, wigner_function

    H = average_hamiltonian(args.level, args.cutoff)
    _, vecs = np.linalg.eigh(H)
    state = vecs[:, 0].astype(complex)
    xs = np.linspace(-args.half_width, args.half_width, args.grid)
    W = wigner_function(state, xs, xs)
    _emit(args, gio.wigner_csv(xs, xs, W))
    return 0


if __name__ == "__main__":
    sys.exit(main())
