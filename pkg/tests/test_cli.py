import json

import pytest

from flgauge.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def run_json(capsys, *argv):
    rc, out, _ = run(capsys, "--json", *argv)
    return rc, json.loads(out)


def test_mazur_numbers(capsys):
    rc, data = run_json(capsys, "mazur-numbers", "--p", "3", "--max", "4")
    assert rc == 0 and data["values"] == [1, 2, 2, 3]
    assert data["schema"] == "flgauge/mazur-numbers/1"


def test_verify_divisibility(capsys):
    rc, out, _ = run(capsys, "verify", "--p", "2", "--witt-len", "3", "--suite", "divisibility")
    assert rc == 0
    assert "gamma_2(v+), 3*gamma_4(v+)" in out


@pytest.mark.parametrize("suite", ["pd", "bigwitt", "psi-maz", "di-matrix", "tor1", "effectivity"])
def test_verify_suites(capsys, suite):
    rc, data = run_json(capsys, "verify", "--p", "3", "--witt-len", "2", "--suite", suite)
    assert rc == 0 and data["ok"]


def test_verify_window_too_small(capsys):
    rc, _, err = run(capsys, "verify", "--p", "2", "--witt-len", "3", "--window", "4")
    assert rc == 2 and "--window" in err


def test_syn_unit(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "syn", "--in", str(fixtures_dir / "unit.fl"), "--weight", "1")
    assert rc == 0
    assert out.splitlines() == ["H0 = ()", "H1 = (3^4)"]


def test_syn_crosscheck(capsys, fixtures_dir):
    rc, data = run_json(capsys, "syn", "--in", str(fixtures_dir / "k1_p3.fl"), "--weight", "1", "--crosscheck")
    assert rc == 0 and data["crosscheck"]["ok"]


def test_fl_check(capsys, fixtures_dir):
    rc, data = run_json(capsys, "fl", "check", "--in", str(fixtures_dir / "ext_p3.fl"))
    assert rc == 0 and data["ok"]


def test_fl_check_invalid(capsys, tmp_path):
    bad = tmp_path / "bad.fl"
    bad.write_text("p 3\nN 1\nwmax 0\npiece 0 free 1\nphi 0 1x1\n  0\n")
    rc, data = run_json(capsys, "fl", "check", "--in", str(bad))
    assert rc == 1 and data["witness"] == "Σ im(φ_i) ≠ F^0"


def test_fl_cokernel(capsys, fixtures_dir, tmp_path):
    rc, out, _ = run(capsys, "fl", "cokernel", "--in", str(fixtures_dir / "times_p.fl"))
    assert rc == 0 and "piece 0 free 0 torsion 1" in out


def test_fl_ext1(capsys, fixtures_dir):
    rc, data = run_json(capsys, "fl", "ext1", "--in", str(fixtures_dir / "k0_p3.fl"),
                        "--in2", str(fixtures_dir / "k0_p3.fl"))
    assert rc == 0 and (data["hom_dim"], data["ext1_dim"]) == (1, 1)


def test_fl_twist(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "fl", "twist", "--in", str(fixtures_dir / "unit.fl"), "--i", "1")
    assert rc == 0 and out == (fixtures_dir / "tate1.fl").read_text()


def test_fl_lift(capsys, fixtures_dir):
    rc, out, _ = run(capsys, "fl", "lift", "--in", str(fixtures_dir / "k1_p3.fl"), "--precision", "3")
    assert rc == 0 and "N 3" in out


def test_sen_commands(capsys, fixtures_dir):
    path = str(fixtures_dir / "ext_p3.fl")
    assert run_json(capsys, "sen", "theta", "--in", path)[1]["theta"] == [[0, 1], [0, 1]]
    assert run_json(capsys, "sen", "alpha", "--in", path)[1]["alpha"] == [[0, 1], [0, 0]]
    rc, data = run_json(capsys, "sen", "ext-class", "--in", path)
    assert rc == 0 and data["class"] == 1 and not data["splits"]


def test_sen_apply_splits(capsys, fixtures_dir, tmp_path):
    rc, out, _ = run(capsys, "sen", "apply", "--in", str(fixtures_dir / "ext_p3.fl"))
    assert rc == 0
    split = tmp_path / "split.fl"
    split.write_text(out)
    rc, data = run_json(capsys, "sen", "ext-class", "--in", str(split))
    assert data["class"] == 0 and data["splits"]


def test_deterministic_json(capsys, fixtures_dir):
    argv = ("sen", "theta", "--in", str(fixtures_dir / "ext_p3_f2.fl"))
    assert run(capsys, "--json", *argv)[1] == run(capsys, "--json", *argv)[1]


def test_usage_errors(capsys):
    assert run(capsys, "mazur-numbers", "--p", "4", "--max", "3")[0] == 2
    assert run(capsys)[0] == 2
    rc, data = run_json(capsys, "fl", "check", "--in", "/nonexistent.fl")
    assert rc == 2 and data["error"] == "io"


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.fl"
    bad.write_text("p 3\nN 2\nwmax 0\npiece 0 free 1\nphi 0 1x2\n  1 0\n")
    rc, data = run_json(capsys, "fl", "check", "--in", str(bad))
    assert rc == 2 and data["error"] == "parse" and "line 5" in data["message"]


def test_fl_ext1_needs_second_file(capsys, fixtures_dir):
    assert run(capsys, "fl", "ext1", "--in", str(fixtures_dir / "k0_p3.fl"))[0] == 2
