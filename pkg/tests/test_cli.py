import json

import pytest
from click.testing import CliRunner

from yforge.cli import ConfigError, main, parse_scenario, parse_word, run_scenario
from yforge.root_data import datum

GL = {"kind": "gl", "theta": -1, "m": 2, "n": 2, "lam": ["2", "1"], "mu": ["1", "0"], "tasks": "all"}
SO = {"kind": "so", "theta": -1, "m": 1, "n": 2, "lam": ["0"], "mu": ["0"], "tasks": ["split"]}


def _write(tmp_path, name, config):
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return str(path)


def test_worked_example_report():
    report = run_scenario(GL)
    assert report["passed"]
    res = report["results"]
    assert res["gram"]["quotient_dim"] == 4
    assert res["quotient"]["irreducible"]
    assert res["roundtrip"]["passed"]
    assert res["drinfeld"]["forward"]["polys"] == [["-3/4", "-1/1", "1/1"]]


def test_split_report():
    res = run_scenario(SO)["results"]["split"]
    assert res["summands"] == 2 and res["deltas"] == [-1, 1]
    assert res["commutant_dim"] == 2 and res["conjugation_exchanges"]


def test_empty_tasks_give_metadata_only():
    report = run_scenario(dict(GL, tasks=[]))
    assert report["results"] == {} and report["passed"]
    assert report["scenario"]["lam"] == ["2/1", "1/1"]


@pytest.mark.parametrize(
    "patch,field",
    [
        ({"kind": "e8"}, "kind"),
        ({"theta": 0}, "theta"),
        ({"lam": ["1"]}, "lam"),
        ({"mu": ["a"]}, "mu"),
        ({"tasks": ["nope"]}, "tasks"),
    ],
)
def test_invalid_configs(patch, field):
    with pytest.raises(ConfigError) as err:
        parse_scenario(dict(GL, **patch))
    assert err.value.field == field


def test_odd_n_with_symplectic_dual_is_rejected():
    with pytest.raises(ConfigError):
        parse_scenario({"kind": "sp", "theta": -1, "m": 1, "n": 3, "lam": ["0"], "mu": ["0"], "tasks": []})


def test_word_parsing():
    d = datum("gl", 3)
    assert parse_word("2,1,2", d) == (2, 1, 2)
    assert parse_word(None, d) is None
    with pytest.raises(ConfigError):
        parse_word("1,1", d)


def test_cli_exit_codes(tmp_path):
    runner = CliRunner()
    good = _write(tmp_path, "gl.json", dict(GL, tasks=["gram", "quotient"]))
    res = runner.invoke(main, ["run", "--config", good])
    assert res.exit_code == 0
    assert json.loads(res.output)["passed"]
    bad = _write(tmp_path, "bad.json", dict(GL, theta=3))
    res = runner.invoke(main, ["run", "--config", bad])
    assert res.exit_code == 2
    assert json.loads(res.output) == {"error": "invalid_config", "field": "theta", "message": "theta must be 1 or -1"}
    res = runner.invoke(main, ["gram", "--config", good, "--word", "1,1"])
    assert res.exit_code == 2


def test_subcommands(tmp_path):
    runner = CliRunner()
    gl = _write(tmp_path, "gl.json", GL)
    so = _write(tmp_path, "so.json", SO)
    for cmd, cfg in [("check-relations", gl), ("build-module", gl), ("drinfeld", gl), ("roundtrip", so)]:
        res = runner.invoke(main, [cmd, "--config", cfg])
        assert res.exit_code == 0, (cmd, res.output)
    res = runner.invoke(main, ["check-relations", "--config", gl, "--seed", "7"])
    assert res.exit_code == 0 and json.loads(res.output)["random"]["seed"] == 7


def test_reports_are_deterministic(tmp_path, monkeypatch):
    monkeypatch.setenv("YFORGE_CACHE_DIR", str(tmp_path / "cache"))
    runner = CliRunner()
    gl = _write(tmp_path, "gl.json", GL)
    first = runner.invoke(main, ["run", "--config", gl]).output
    second = runner.invoke(main, ["run", "--config", gl]).output
    assert first == second
    assert list((tmp_path / "cache").glob("gram-*.json"))
    assert "." not in "".join(c for c in first if not c.isspace()).replace("0.1.0", "")


def test_out_flag_writes_file(tmp_path):
    gl = _write(tmp_path, "gl.json", dict(GL, tasks=["gram"]))
    out = tmp_path / "report.json"
    res = CliRunner().invoke(main, ["gram", "--config", gl, "--out", str(out)])
    assert res.exit_code == 0 and res.output == ""
    assert json.loads(out.read_text())["results"]["gram"]["dimension"] == 4


def test_suite(tmp_path):
    runner = CliRunner()
    empty = tmp_path / "empty"
    empty.mkdir()
    res = runner.invoke(main, ["suite", str(empty)])
    assert res.exit_code == 0 and json.loads(res.output)["scenarios"] == {}

    cases = tmp_path / "cases"
    cases.mkdir()
    _write(cases, "a_gl.json", dict(GL, tasks=["gram"]))
    _write(cases, "b_so.json", SO)
    out = tmp_path / "reports"
    res = runner.invoke(main, ["suite", str(cases), "--out", str(out)])
    assert res.exit_code == 0
    assert sorted(p.name for p in out.iterdir()) == ["a_gl.json", "b_so.json", "index.json"]

    _write(cases, "c_bad.json", dict(GL, m=3))
    (cases / "d_broken.json").write_text("{")
    res = runner.invoke(main, ["suite", str(cases)])
    assert res.exit_code == 1
    index = json.loads(res.output)
    assert index["scenarios"]["a_gl"]["passed"]
    assert index["scenarios"]["c_bad"] == {"passed": False, "error": "invalid_config"}
    assert index["scenarios"]["d_broken"] == {"passed": False, "error": "io"}
