"""Text formats: lattice files, stabilizer-code files, CSV emitters.

Lattice file: line 1 "n <modes>", line 2 "scale_sq <num>/<den>", then 2n
lines of 2n integers (base matrix rows).  Stabilizer-code file: line 1
"n k", then r lines of 2n bits, X part before Z part.  All numeric CSV
output uses 17 significant digits so seeded runs are byte-stable.
"""

from __future__ import annotations

from fractions import Fraction

from .constructions import BinarySymplecticCode
from .errors import ParseError
from .exactmat import ExactScaledMatrix, IntMatrix

FLOAT_FMT = "{:.17g}"


def fmt(x) -> str:
    if isinstance(x, float):
        return FLOAT_FMT.format(x)
    return str(x)


def write_lattice(M: ExactScaledMatrix) -> str:
    n2 = M.shape[0]
    lines = [f"n {n2 // 2}"]
    s = Fraction(M.scale_sq)
    lines.append(f"scale_sq {s.numerator}/{s.denominator}")
    for row in M.base.rows:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_lattice(text: str) -> ExactScaledMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ParseError("lattice file needs a header and a scale line")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise ParseError(f"line 1 must read 'n <modes>', got {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError as exc:
        raise ParseError(f"mode count {head[1]!r} is not an integer") from exc
    sc = lines[1].split()
    if len(sc) != 2 or sc[0] != "scale_sq" or "/" not in sc[1]:
        raise ParseError(f"line 2 must read 'scale_sq <num>/<den>', got {lines[1]!r}")
    num, den = sc[1].split("/")
    try:
        scale = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scale {sc[1]!r}") from exc
    rows = []
    if len(lines) != 2 + 2 * n:
        raise ParseError(f"expected {2 * n} matrix rows, found {len(lines) - 2}")
    for idx, ln in enumerate(lines[2:], start=3):
        toks = ln.split()
        if len(toks) != 2 * n:
            raise ParseError(f"line {idx}: expected {2 * n} entries")
        row = []
        for t in toks:
            try:
                row.append(int(t))
            except ValueError as exc:
                raise ParseError(
                    f"line {idx}: non-integer token {t!r}"
                ) from exc
        rows.append(row)
    return ExactScaledMatrix(IntMatrix(rows), scale)


def write_stabilizer_code(Q: BinarySymplecticCode) -> str:
    lines = [f"{Q.n} {Q.k}"]
    for row in Q.generators.rows:
        lines.append(" ".join(str(b) for b in row))
    return "\n".join(lines) + "\n"


def parse_stabilizer_code(text: str) -> BinarySymplecticCode:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty stabilizer-code file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError("line 1 must read '<n> <k>'")
    try:
        n, k = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError("line 1 must hold two integers") from exc
    rows = []
    for idx, ln in enumerate(lines[1:], start=2):
        toks = ln.split()
        if len(toks) != 2 * n:
            raise ParseError(f"line {idx}: expected {2 * n} bits")
        row = []
        for t in toks:
            if t not in ("0", "1"):
                raise ParseError(f"line {idx}: non-bit token {t!r}")
            row.append(int(t))
        rows.append(row)
    if len(rows) != n - k:
        raise ParseError(f"expected {n - k} generator rows, found {len(rows)}")
    return BinarySymplecticCode(IntMatrix(rows))


def theta_csv(theta) -> str:
    lines = ["length_sq,count"]
    for d2, cnt in theta.entries:
        key = float(d2)
        lines.append(f"{fmt(key)},{cnt}")
    return "\n".join(lines) + "\n"


def ntru_csv(rows) -> str:
    lines = ["n,q,d,mode,trial,lambda1,gh_ref,qi_bound"]
    for r in rows:
        lines.append(
            f"{r['n']},{r['q']},{r['d']},{r['mode']},{r['trial']},"
            f"{fmt(r['lambda1'])},{fmt(r['gh_ref'])},{fmt(r['qi_bound'])}"
        )
    return "\n".join(lines) + "\n"


def bench_csv(reports, code_name: str) -> str:
    lines = ["code,decoder,sigma,trials,failures,rate,ci_lo,ci_hi,seed"]
    for r in reports:
        lines.append(
            f"{code_name},{r['decoder']},{fmt(r['sigma'])},{r['trials']},"
            f"{r['failures']},{fmt(r['rate'])},{fmt(r['ci_lo'])},"
            f"{fmt(r['ci_hi'])},{r['seed']}"
        )
    return "\n".join(lines) + "\n"


def spectrum_csv(result) -> str:
    lines = ["N,E0,E1,E2,delta_q,delta_p"]
    for r in result["rows"]:
        lines.append(
            f"{r['N']},{fmt(r['E0'])},{fmt(r['E1'])},{fmt(r['E2'])},"
            f"{fmt(r['delta_q'])},{fmt(r['delta_p'])}"
        )
    if result.get("fit_exponent") is not None:
        lines.append(f"# fit_exponent {fmt(result['fit_exponent'])}")
    return "\n".join(lines) + "\n"


def wigner_csv(xs, ps, W) -> str:
    lines = ["x,p,W"]
    for i, x in enumerate(xs):
        for j, p in enumerate(ps):
            lines.append(f"{fmt(float(x))},{fmt(float(p))},{fmt(float(W[i, j]))}")
    return "\n".join(lines) + "\n"


def key_json_dict(key) -> dict:
    return {
        "n": key.params.n,
        "q": key.params.q,
        "p": key.params.p,
        "d": key.params.d,
        "phi": key.params.phi,
        "f": list(key.f),
        "g": list(key.g),
        "h": list(key.h),
    }
