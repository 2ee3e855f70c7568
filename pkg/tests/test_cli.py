from pathlib import Path

import pytest

from realtrace.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_trace_commands(capsys):
    alpha = DATA / "da3.alpha"
    assert run(capsys, "trace", "equiv", alpha, "ac", "ca")[1] == "true\n"
    assert run(capsys, "trace", "equiv", alpha, "abc", "cab")[1] == "false\n"
    assert run(capsys, "trace", "nf", alpha, "cab")[1] == "acb\n"
    assert run(capsys, "trace", "foata", alpha, "acb")[1] == "(ac)(b)\n"
    assert run(capsys, "trace", "concat", alpha, "ab", "ba")[1] == "abba\n"
    assert run(capsys, "trace", "prefix", alpha, "c", "ac")[1] == "suffix a\n"
    assert run(capsys, "trace", "prefix", alpha, "b", "ab")[1] == "none\n"


def test_metric(capsys):
    alpha = DATA / "da3.alpha"
    assert run(capsys, "metric", alpha, "aba", "abb")[1] == "l_pref=2 d_pref=1/4\n"
    assert run(capsys, "metric", alpha, "ab", "ab", "--cap", "4")[1] == "l_pref=>=4 d_pref=<=1/16\n"


def test_omega(capsys):
    assert run(capsys, "omega", "delta", DATA / "zero_star_one_plus.aut", "(01)")[1] == "true\n"
    assert run(capsys, "omega", "delta", DATA / "zero_star_one_plus.aut", "1(0)")[1] == "false\n"
    assert run(capsys, "omega", "accepts", DATA / "zero_star_one.aut", "0(01)")[1] == "true\n"
    code, out, _ = run(capsys, "omega", "empty", DATA / "zero_star_one.aut")
    assert out.startswith("nonempty witness")
    code, out, _ = run(capsys, "omega", "decompose", DATA / "zero_star_one.aut")
    assert code == 0 and out.splitlines()[0].endswith("components")


def test_rational(capsys):
    alpha, S = DATA / "da3.alpha", DATA / "ab_ba.aut"
    assert run(capsys, "rational", "psi", S, "0", "--alphabet", alpha)[1] == "ab\n"
    assert run(capsys, "rational", "psi", S, "1", "--alphabet", alpha)[1] == "ba\n"
    code, _, err = run(capsys, "rational", "psi", S, "2", "--alphabet", alpha)
    assert code == 2 and "out of range" in err
    args = ["rational", "hcheck", S, "--alphabet", alpha, "--n", "0,1,0", "--m", "0,1,1", "--k", "2"]
    assert run(capsys, *args)[1] == "true\n"
    code, out, _ = run(capsys, "rational", "from-buchi", DATA / "binary.alpha", DATA / "zero_star_one.aut")
    assert code == 0 and out.startswith("4 components")


def test_sigma11(capsys):
    tree, R = DATA / "depth2.tree", DATA / "zero_star_one.aut"
    assert run(capsys, "sigma11", "code-tree", tree)[1] == "0' A 1 0 B 1' 1' 1' 1' A\n"
    code, out, _ = run(capsys, "sigma11", "check-lemma", tree, "rr", R, "--depth", "2")
    assert code == 0 and out == "sigma 0' A 1 0 B 1' 1' 1' 1'\ntrue\n"
    assert run(capsys, "sigma11", "path", DATA / "parity.rt", R)[1] == "branch (l) labels (01)\n"
    assert run(capsys, "sigma11", "path", DATA / "constant_one.rt", R)[1].startswith("branch")
    code, out, _ = run(capsys, "sigma11", "build-l", R)
    assert code == 0 and out.startswith("mode: buchi")


def test_modulus(capsys, tmp_path):
    t = tmp_path / "t.tree"
    t.write_text("depth: 3\nlevel0: 0\nlevel1: 1 0\nlevel2: 1 1 1 1\nlevel3: 0 0 0 0 0 0 0 0\n")
    s = tmp_path / "s.tree"
    s.write_text("depth: 3\nlevel0: 0\nlevel1: 1 0\nlevel2: 0 1 0 1\nlevel3: 1 1 1 1 1 1 1 1\n")
    assert run(capsys, "sigma11", "modulus", t, s, "--k", "2")[1] == "cap=2 true\n"
    code, _, err = run(capsys, "sigma11", "modulus", t, s, "--k", "3")
    assert code == 2 and "depth" in err


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.aut"
    bad.write_text("alphabet: 0\nstates: p\ntrans: p 0 q\n")
    code, _, err = run(capsys, "omega", "empty", bad)
    assert code == 2 and "line 3" in err
    code, _, err = run(capsys, "trace", "nf", tmp_path / "missing.alpha", "a")
    assert code == 2 and "cannot read" in err
    code, _, _ = run(capsys, "trace", "equiv", DATA / "da3.alpha", "ac")
    assert code == 2
    code, _, _ = run(capsys, "trace", "nf", DATA / "da3.alpha", "axz")
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2


def test_battery_is_deterministic(capsys):
    code, first, _ = run(capsys, "battery", "--max-len", "3")
    _, second, _ = run(capsys, "battery", "--max-len", "3")
    assert code == 0 and first == second
    assert first.count("PASS") == 9
