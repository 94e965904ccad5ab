import json
import subprocess
import sys

import pytest

from riesz_lab import __version__
from riesz_lab.cli import main, parse_complex, parse_range, parse_t_grid
from riesz_lab.errors import ParseError


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_complex():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("-0.5-3i") == -0.5 - 3j
    assert parse_complex("2") == 2
    assert parse_complex("4j") == 4j
    with pytest.raises(ParseError):
        parse_complex("one")


def test_parse_grids():
    assert len(parse_range("0.001:20:40", "sigma")) == 40
    assert list(parse_range("1,2,3", "sigma")) == [1, 2, 3]
    t = parse_t_grid("5:11")
    assert t[0] == -5 and t[-1] == 5 and len(t) == 11
    with pytest.raises(ParseError):
        parse_t_grid("a:b")


def test_eval_json(capsys):
    code, out, _ = run(["eval", "--catalog", "geometric", "--s", "1", "--estimator", "richardson"], capsys)
    assert code == 0
    art = json.loads(out)
    assert art["version"] == __version__ and art["command"] == "eval"
    assert art["parameters"]["catalog"] == "geometric"
    re, im = art["result"]["limit"]
    assert abs(re - 0.5819767068693265) < 1e-3 and abs(im) < 1e-12


def test_eval_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["eval", "--catalog", "eta", "--s", "0.5+1i", "--kind", "second"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_eval_tolerance_failure(capsys):
    code, _, err = run(["eval", "--catalog", "eta", "--s", "0.1", "--tolerance", "1e-12"], capsys)
    assert code == 2 and "numerical failure" in err


def test_invalid_inputs(capsys):
    assert run(["eval", "--catalog", "nope"], capsys)[0] == 1
    assert run(["eval", "--catalog", "eta", "--s", "x+y"], capsys)[0] == 1
    assert run(["eval"], capsys)[0] == 1
    assert run(["frobnicate"], capsys)[0] == 1
    code, _, err = run(["eval", "--catalog", "eta", "--series", "f.json"], capsys)
    assert code == 1 and "error" in err


def test_series_file(tmp_path, capsys):
    from riesz_lab import DirichletSeries, power_frequency, table

    D = DirichletSeries(power_frequency(1.0), table([1.0, 0.5]))
    path = tmp_path / "d.json"
    path.write_text(json.dumps(D.to_dict()))
    code, out, _ = run(["eval", "--series", str(path), "--s", "0", "--x-max", "60", "--kind", "second"], capsys)
    assert code == 0
    re, _ = json.loads(out)["result"]["limit"]
    assert abs(re - 1.5) < 1e-12
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["eval", "--series", str(bad)], capsys)[0] == 1


def test_csv_output(tmp_path, capsys):
    path = tmp_path / "trace.csv"
    assert main(["abscissa", "--catalog", "zeta", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith(f"# riesz-lab {__version__} abscissa")
    assert lines[1] == "x,slope"
    assert len(lines) > 10


def test_csv_rejected_without_table(tmp_path, capsys):
    assert run(["catalog", "--out", str(tmp_path / "c.csv")], capsys)[0] == 1


def test_abscissa(capsys):
    code, out, _ = run(["abscissa", "--catalog", "zeta", "--kind", "second"], capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert abs(res["pointwise"]["value"] - 1.0) < 0.1


def test_perron_and_recover(capsys):
    code, out, _ = run(["perron", "--catalog", "geometric", "--k", "2", "--x", "2.5"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["abs_error"] < 1e-4
    code, out, _ = run(["recover", "--catalog", "two_term", "--n-max", "2"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["max_abs_error"] < 1e-3


def test_norm(tmp_path, capsys):
    path = tmp_path / "n.csv"
    argv = ["norm", "--catalog", "single1", "--grid-sigma", "0.01:5:6", "--grid-t", "5:21"]
    assert main(argv + ["--out", str(path)]) == 0
    assert path.read_text().splitlines()[1] == "sigma,value"
    code, out, _ = run(argv, capsys)
    assert code == 0 and "norm" in json.loads(out)["result"]


def test_catalog_command(capsys):
    code, out, _ = run(["catalog"], capsys)
    names = [e["name"] for e in json.loads(out)["result"]["entries"]]
    assert code == 0 and "eta" in names and "zeta" in names


def test_verify_subprocess():
    proc = subprocess.run([sys.executable, "-m", "riesz_lab", "verify"], capture_output=True, text=True,
                          timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
    assert proc.stdout.count("PASS") >= 10


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
