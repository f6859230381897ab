import io
import os

import pytest

from froblat.cli import dispatch

FIX = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def run(argv):
    out = io.StringIO()
    code = dispatch(argv, out=out)
    return code, out.getvalue()


def fx(name):
    return os.path.join(FIX, name)


def test_density_golden():
    code, text = run(["density", "--gram", fx("siegel_ssp_p5.gram"),
                      "--ell", "5", "--m", "5"])
    assert code == 0
    assert "delta=126/125" in text


def test_density_with_hanke():
    code, text = run(["density", "--gram", fx("hilbert_split_p5.gram"),
                      "--ell", "5", "--m-range", "1..6", "--hanke"])
    assert code == 0
    for line in text.splitlines():
        if "m=3" in line:
            assert "delta=6/5" in line and "hanke=6/5" in line


def test_decay_table():
    code, text = run(["decay", "--case", "hilbert-split", "--p", "5",
                      "--curve", fx("xt_yt.curve"), "--nmax", "2"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "case=hilbert-split A=2 nt=63"
    assert "vector=w1 n0=2 n1=12 n2=62" in lines
    assert "vector=w4 n0=inf n1=inf n2=inf" in lines


def test_decay_case_mismatch():
    code, text = run(["decay", "--case", "siegel-superspecial",
                      "--curve", fx("xt_yt.curve")])
    assert code == 1
    assert "error=InvalidParameter" in text


def test_theta_counts():
    code, text = run(["theta", "--lattice", fx("z4.gram"), "--max", "2"])
    assert code == 0
    assert "m=1 r=8" in text and "m=2 r=24" in text
    code, text = run(["theta", "--lattice", fx("z5.gram"), "--max", "10",
                      "--squares", "1"])
    assert code == 0
    assert "kind=squares" in text


def test_eisenstein_records():
    code, text = run(["eisenstein", "--lattice", fx("ls_global.gram"),
                      "--m-range", "4..4"])
    assert code == 0
    assert "m=4" in text and "sign=-1" in text


def test_missing_file_exits_one():
    code, text = run(["density", "--gram", "no_such_file.gram",
                      "--ell", "5", "--m", "1"])
    assert code == 1
    assert "error=" in text


def test_determinism_byte_identical():
    args = ["density", "--gram", fx("siegel_sg_p5.gram"), "--ell", "5",
            "--m-range", "1..12"]
    _, first = run(args)
    _, second = run(args)
    assert first == second
    args2 = ["decay", "--curve", fx("xt_yt.curve"), "--nmax", "1"]
    _, a = run(args2)
    _, b = run(args2)
    assert a == b


def test_selftest_quick():
    code, text = run(["selftest", "--quick"])
    assert code == 0
    assert "failures=0" in text
    for p in (5, 7, 11, 13):
        assert f"check=densities p={p} ok=1" in text


def test_fixture_root_env(monkeypatch, tmp_path):
    monkeypatch.setenv("FROBLAT_FIXTURES", os.path.abspath(FIX))
    code, text = run(["density", "--gram", "z4.gram", "--ell", "3",
                      "--m", "1"])
    assert code == 0
