import csv
import subprocess
import sys

import pytest

from nearint.cli import run_cli
from nearint.fileio import read_certificate, read_pointset


@pytest.fixture(scope="module")
def fig_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "fig.txt"
    assert run_cli(["construct", "sarkozy3d", "--X", "1000000", "--delta", "1/20000",
                    "--out", str(path)]) == 0
    return path


def test_construct_and_verify(fig_file, capsys):
    f = read_pointset(fig_file)
    assert len(f.points) == 256 and f.meta["k"] == 3 and f.meta["t"] == 3
    assert run_cli(["verify", "--in", str(fig_file), "--delta", "1/20000"]) == 0
    out = capsys.readouterr().out
    assert "status: PASS" in out and "points: 256" in out


def test_decimal_delta_is_exact(fig_file):
    assert run_cli(["verify", "--in", str(fig_file), "--delta", "5e-5"]) == 0


def test_verify_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "two.txt"
    path.write_text("format: nearint-pointset/1\ndim: 1\nmode: exact-lattice\nnorm: l2\n"
                    "points: 2\n0\n1\n")
    assert run_cli(["verify", "--in", str(path), "--delta", "1/10"]) == 2
    assert "status: FAIL" in capsys.readouterr().out


def test_verify_is_pure(fig_file):
    codes = {run_cli(["verify", "--in", str(fig_file), "--delta", "1/1000"]) for _ in range(2)}
    assert codes == {2}


def test_certify_infeasible_report(tmp_path, capsys):
    out = tmp_path / "c2.txt"
    assert run_cli(["certify", "--delta", "1/10", "--ell", "2", "--max-degree", "16",
                    "--out", str(out)]) == 0
    assert "infeasible" in capsys.readouterr().out
    assert "status: infeasible" in out.read_text()
    assert run_cli(["check-cert", "--in", str(out)]) == 1


def test_certify_and_check(tmp_path):
    out = tmp_path / "c.txt"
    assert run_cli(["certify", "--delta", "0.3", "--ell", "3", "--out", str(out)]) == 0
    assert read_certificate(out).margin > 0
    assert run_cli(["check-cert", "--in", str(out)]) == 0
    text = out.read_text().replace("margin: ", "margin: 9")
    bad = tmp_path / "bad.txt"
    bad.write_text(text)
    assert run_cli(["check-cert", "--in", str(bad)]) == 2


def test_snowflake_construct_and_bessel(tmp_path, capsys):
    out = tmp_path / "f.txt"
    assert run_cli(["construct", "snowflake-lift", "--M", "8", "--levels", "8", "--eta", "0.4",
                    "--delta", "auto", "--out", str(out)]) == 0
    f = read_pointset(out)
    assert f.dim == 4 and len(f.points) == 8 and f.meta["eta"] == 0.4
    assert run_cli(["verify", "--in", str(out)]) == 0
    assert run_cli(["besselcheck", "--in", str(out), "--kmax", "3", "--samples", "100000",
                    "--seed", "1"]) == 0
    assert "C_3" in capsys.readouterr().out


def test_snowflake_delta_too_large(tmp_path, capsys):
    out = tmp_path / "f.txt"
    assert run_cli(["construct", "snowflake-lift", "--M", "8", "--levels", "8", "--eta", "0.4",
                    "--delta", "0.4", "--out", str(out)]) == 1
    assert "delta_phi" in capsys.readouterr().err


def test_bruteforce(tmp_path, capsys):
    cand = tmp_path / "cand.txt"
    cand.write_text("format: nearint-pointset/1\ndim: 1\nmode: certified-float\nnorm: l2\n"
                    "points: 3\n0\n0.5\n1.5\n")
    assert run_cli(["bruteforce", "--in", str(cand), "--delta", "1/4", "--exact"]) == 0
    assert "2 of 3" in capsys.readouterr().out
    sub = tmp_path / "sub.txt"
    assert run_cli(["bruteforce", "--in", str(cand), "--delta", "1/4", "--greedy", "--seed", "4",
                    "--out", str(sub)]) == 0
    assert len(read_pointset(sub).points) == 2


def test_bound(capsys):
    assert run_cli(["bound", "--dim", "4"]) == 0
    assert "X^(3/2) log X" in capsys.readouterr().out
    assert run_cli(["bound", "--dim", "3", "--X", "1000000"]) == 0
    assert "14.5086577" in capsys.readouterr().out


def test_plot_data(fig_file, tmp_path):
    out = tmp_path / "yz.csv"
    assert run_cli(["plot-data", "--in", str(fig_file), "--projection", "yz",
                    "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["index", "y", "z"] and len(rows) == 257
    pts = read_pointset(fig_file).points.coords.tolist()
    assert [int(rows[2][1]), int(rows[2][2])] == pts[1][1:]
    assert run_cli(["plot-data", "--in", str(fig_file), "--projection", "yw",
                    "--out", str(out)]) == 1


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["verify", "--in", "x"], ["verify", "--in", "x", "--delta", "0.6"],
    ["construct", "sarkozy3d", "--X", "1000", "--delta", "5e-5", "--out", "/dev/null"],
    ["verify", "--in", "/nonexistent/file", "--delta", "0.1"],
    ["certify", "--delta", "abc", "--ell", "3", "--out", "x"],
])
def test_usage_errors_exit_1(argv):
    assert run_cli(argv) == 1


def test_cap_exceeded_reports_count(tmp_path, capsys):
    assert run_cli(["construct", "sarkozy3d", "--X", "1e12", "--delta", "1/20000", "--cap", "100",
                    "--out", str(tmp_path / "x.txt")]) == 1
    assert "count:" in capsys.readouterr().out


def test_internal_error_exit_3(monkeypatch):
    import nearint.cli as cli
    monkeypatch.setattr(cli.profile, "bound_profile",
                        lambda d: (_ for _ in ()).throw(RuntimeError("boom")))
    assert run_cli(["bound", "--dim", "3"]) == 3


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "nearint.cli", "bound", "--dim", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "X^(1/2)" in r.stdout
