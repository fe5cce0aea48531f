import json
import subprocess
import sys

import pytest

from sumnet.cli import main
from sumnet.fixtures import fixture_text


@pytest.fixture
def files(tmp_path):
    def write(name, text=None):
        p = tmp_path / f"{name.lower()}.toml"
        p.write_text(text if text is not None else fixture_text(name))
        return str(p)

    return write


def test_solve_writes_report(files, tmp_path, capsys):
    path = files("BUTTERFLY")
    out = tmp_path / "b.json"
    assert main(["solve", path, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["feasible"] and data["verdicts"]["valid"]


def test_solve_default_output_name(files, tmp_path, monkeypatch):
    path = files("FAN3")
    monkeypatch.chdir(tmp_path)
    assert main(["solve", path]) == 0
    assert (tmp_path / "fan3.report.json").exists()


def test_check_cut_prints_pair(files, capsys):
    assert main(["check", files("CUT")]) == 1
    assert "(s1, t2)" in capsys.readouterr().out


def test_check_feasible(files, capsys):
    assert main(["check", files("BUTTERFLY")]) == 0


def test_unsupported_shape_exit_2(files, capsys):
    text = (
        'nodes = ["s1", "s2", "s3", "m", "t1", "t2", "t3"]\nsources = ["s1", "s2", "s3"]\n'
        'terminals = ["t1", "t2", "t3"]\nedges = [["s1", "m"], ["s2", "m"], ["s3", "m"], '
        '["m", "t1"], ["m", "t2"], ["m", "t3"]]\n'
    )
    assert main(["solve", files("S3", text), "--out", "-"]) == 2
    assert "unsupported shape" in capsys.readouterr().err


def test_solve_infeasible_exit_1(files, tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["solve", files("CUT"), "--out", str(out)]) == 1
    assert "s1 to t2" in capsys.readouterr().err
    assert json.loads(out.read_text())["feasible"] is False


ROUND_TRIPS = [
    ("BUTTERFLY", "auto"), ("BUTTERFLY", "2xn"), ("BUTTERFLY", "nx2"),
    ("FAN3", "auto"), ("DIAMOND", "auto"), ("DD", "auto"),
    ("STAR3x2", "auto"), ("STAR1", "auto"), ("STAR1", "tree"), ("LINE1", "auto"),
]


@pytest.mark.parametrize("name, solver", ROUND_TRIPS)
def test_verify_accepts_solve_output(files, tmp_path, name, solver):
    path = files(name)
    out = tmp_path / "r.json"
    assert main(["solve", path, "--solver", solver, "--out", str(out)]) == 0
    assert main(["verify", path, str(out)]) == 0


def test_verify_rejects_tampered_report(files, tmp_path, capsys):
    path = files("BUTTERFLY")
    out = tmp_path / "r.json"
    main(["solve", path, "--out", str(out)])
    data = json.loads(out.read_text())
    last = data["edges"][-1]
    last["vector"] = [1, 0]
    out.write_text(json.dumps(data))
    assert main(["verify", path, str(out)]) == 1


def test_simulate(files, capsys):
    assert main(["simulate", files("BUTTERFLY"), "--trials", "30", "--solver", "2xn", "--field-m", "3"]) == 0
    assert "0 wrong" in capsys.readouterr().out


def test_simulate_from_report(files, tmp_path):
    path = files("STAR3x2")
    out = tmp_path / "r.json"
    main(["solve", path, "--out", str(out)])
    assert main(["simulate", path, "--report", str(out), "--trials", "20"]) == 0


def test_gen_is_deterministic(tmp_path, capsys):
    args = ["gen", "--kind", "two_by_n", "--sources", "2", "--terminals", "3", "--extra", "4", "--seed", "7"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_gen_infeasible_then_check(tmp_path, capsys):
    out = tmp_path / "g.toml"
    args = ["gen", "--kind", "n_by_two", "--sources", "3", "--terminals", "2", "--extra", "3", "--seed", "2", "--infeasible", "--out", str(out)]
    assert main(args) == 0
    assert main(["check", str(out)]) == 1


def test_gen_bad_counts_exit_2(capsys):
    assert main(["gen", "--kind", "two_by_n", "--sources", "3", "--terminals", "2"]) == 2


def test_dot(files, capsys):
    assert main(["dot", files("FAN3")]) == 0
    assert "doublecircle" in capsys.readouterr().out
    assert main(["dot", files("CUT"), "--plain"]) == 0
    assert "label=" not in capsys.readouterr().out


def test_bundled_fixture_names(capsys):
    assert main(["check", "butterfly"]) == 0


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["solve"]) == 2
    assert main(["check", "/no/such/file.toml"]) == 2


def test_parse_error_exit_2(files, capsys):
    assert main(["check", files("BAD", 'nodes = ["a"]\nsources = ["a"]\nterminals = ["b"]\nedges = []\n')]) == 2
    assert "undeclared" in capsys.readouterr().err


def test_internal_error_exit_3(files, monkeypatch, capsys):
    from sumnet import cli
    from sumnet.errors import InternalError

    def boom(*a, **k):
        raise InternalError("forced")

    monkeypatch.setattr(cli, "solve", boom)
    assert main(["solve", files("BUTTERFLY"), "--out", "-"]) == 3
    assert "internal error" in capsys.readouterr().err


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "sumnet", "check", files("CUT")], capture_output=True, text=True)
    assert proc.returncode == 1 and "(s1, t2)" in proc.stdout


def test_help_exit_0(capsys):
    assert main(["--help"]) == 0
