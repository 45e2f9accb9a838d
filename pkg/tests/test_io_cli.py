import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gkplat import io as gio
from gkplat.constructions import BinarySymplecticCode, HAMMING8_ROWS
from gkplat.errors import ParseError
from gkplat.exactmat import ExactScaledMatrix, IntMatrix


def test_lattice_round_trip():
    M = ExactScaledMatrix(IntMatrix([[1, 0], [0, 2]]), Fraction(3, 7))
    text = gio.write_lattice(M)
    M2 = gio.parse_lattice(text)
    assert M2.base == M.base and M2.scale_sq == M.scale_sq


def test_lattice_parse_errors_name_the_line():
    with pytest.raises(ParseError):
        gio.parse_lattice("")
    with pytest.raises(ParseError, match="line 1"):
        gio.parse_lattice("m 1\nscale_sq 1/1\n1 0\n0 1\n")
    with pytest.raises(ParseError, match="line 2"):
        gio.parse_lattice("n 1\nscale 1\n1 0\n0 1\n")
    with pytest.raises(ParseError, match="line 3"):
        gio.parse_lattice("n 1\nscale_sq 1/1\n1 0.5\n0 1\n")
    with pytest.raises(ParseError, match="non-integer"):
        gio.parse_lattice("n 1\nscale_sq 2/1\n1 x\n0 1\n")


def test_stabilizer_round_trip():
    Q = BinarySymplecticCode(IntMatrix(HAMMING8_ROWS))
    text = gio.write_stabilizer_code(Q)
    Q2 = gio.parse_stabilizer_code(text)
    assert Q2.generators == Q.generators
    with pytest.raises(ParseError):
        gio.parse_stabilizer_code("4 0\n1 2 0 0 0 0 0 0\n")


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "gkplat.cli", *args],
        capture_output=True, text=True, timeout=600,
    )


def test_cli_code_info_square(tmp_path):
    lat = tmp_path / "sq.lat"
    r = run_cli("construct", "square", "--out", str(lat))
    assert r.returncode == 0
    r2 = run_cli("code-info", str(lat))
    assert r2.returncode == 0
    info = json.loads(r2.stdout)
    assert info["type"] == [2]
    assert info["distance"] == pytest.approx(2 ** -0.5)
    assert info["kissing_number"] == 4


def test_cli_code_info_e8(tmp_path):
    lat = tmp_path / "e8.lat"
    assert run_cli("construct", "e8", "--out", str(lat)).returncode == 0
    r = run_cli("code-info", str(lat))
    info = json.loads(r.stdout)
    assert info["type"] == [1, 1, 1, 1]
    assert info["lambda1"] == pytest.approx(2 ** 0.5)


def test_cli_malformed_file_exits_2(tmp_path):
    bad = tmp_path / "bad.lat"
    bad.write_text("n 1\nscale_sq 2/1\n1 oops\n0 1\n")
    r = run_cli("code-info", str(bad))
    assert r.returncode == 2
    assert "line 3" in r.stderr


def test_cli_usage_error_exit_1():
    r = run_cli("construct", "leech")
    assert r.returncode == 1


def test_cli_seeded_determinism(tmp_path):
    lat = tmp_path / "sq.lat"
    run_cli("construct", "square", "--out", str(lat))
    pairs = [
        ("ntru-sample", "--n", "4", "--q", "16", "--trials", "4",
         "--seed", "11"),
        ("ntru-keygen", "--n", "7", "--q", "64", "--d", "2", "--seed", "5"),
        ("decode-bench", str(lat), "--decoder", "med", "--sigma", "0.2",
         "--trials", "50", "--seed", "3"),
        ("channel-demo", "--seed", "13", "--message", "101"),
        ("clifford-synth", "--n", "2", "--d", "3", "--seed", "8"),
    ]
    for args in pairs:
        a = run_cli(*args)
        b = run_cli(*args)
        assert a.returncode == 0, a.stderr
        assert a.stdout == b.stdout


def test_cli_theta_and_spectrum(tmp_path):
    lat = tmp_path / "sq.lat"
    run_cli("construct", "square", "--out", str(lat))
    r = run_cli("theta", str(lat), "--radius-sq", "4")
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "length_sq,count"
    assert lines[1].startswith("0,1")
    r2 = run_cli("floquet-spectrum", "--level", "1", "3", "--cutoff", "80")
    assert r2.returncode == 0
    assert r2.stdout.startswith("N,E0,E1,E2,delta_q,delta_p")


def test_cli_decode_bench_with_ntru_key(tmp_path):
    key = tmp_path / "key.json"
    r = run_cli("ntru-keygen", "--n", "4", "--q", "32", "--d", "1",
                "--seed", "5", "--out", str(key))
    assert r.returncode == 0
    a = run_cli("decode-bench", "--key", str(key), "--decoder", "ntru",
                "--sigma", "0.03", "--trials", "100", "--seed", "9")
    assert a.returncode == 0
    assert ",ntru,0.029" in a.stdout
    b = run_cli("decode-bench", "--key", str(key), "--decoder", "ntru",
                "--sigma", "0.03", "--trials", "100", "--seed", "9")
    assert a.stdout == b.stdout
    # the ntru decoder without a key is a usage error
    bad = run_cli("decode-bench", "--decoder", "ntru", "--sigma", "0.1",
                  "--trials", "5", "--seed", "1")
    assert bad.returncode == 1


def test_cli_construct_from_stabilizer_file(tmp_path):
    stab = tmp_path / "rep.stab"
    stab.write_text("2 1\n1 1 0 0\n")
    lat = tmp_path / "rep.lat"
    r = run_cli("construct", f"stab:{stab}", "--out", str(lat))
    assert r.returncode == 0
    info = run_cli("code-info", str(lat))
    assert json.loads(info.stdout)["type"] == [1, 2]


def test_cli_rademacher_and_tau():
    r = run_cli("clifford-rademacher", "[[2,1],[1,1]]")
    assert r.returncode == 0
    assert r.stdout.strip() == "psi=0 word=RL"
    r2 = run_cli("tau-reduce", "0.3+0.1j")
    assert r2.returncode == 0
    assert r2.stdout.startswith("tau=")
