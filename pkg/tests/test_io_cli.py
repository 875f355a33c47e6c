import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcsim import cli
from spdcsim.config import parse_scenario, source_config
from spdcsim.errors import UsageError
from spdcsim.io import dumps, fmt, read_matrix, write_matrix, write_table

SMALL = "source:\n  preset: kdp-asymmetric\ngrid:\n  n: 512\n  span: auto\n"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips(x):
    assert float(fmt(x)) == x


def test_fmt_non_finite():
    assert fmt(math.nan) == "nan"
    assert fmt(-math.inf) == "-inf"
    assert json.loads(dumps({"a": math.inf}))["a"] == "inf"


def test_dumps_is_valid_json_with_complex_and_arrays():
    obj = {"x": 1.0 / 3, "c": 1 + 2j, "arr": np.arange(3.0), "nested": [{"k": True}, None]}
    back = json.loads(dumps(obj))
    assert back["x"] == 1.0 / 3
    assert back["c"] == {"re": 1.0, "im": 2.0}
    assert back["arr"] == [0.0, 1.0, 2.0]
    with pytest.raises(TypeError):
        dumps({"s": {1, 2}})


def test_matrix_and_table_writers(tmp_path):
    rows, cols = np.array([0.1, 0.2]), np.array([1.0, 2.0, 3.0])
    vals = np.arange(6.0).reshape(2, 3) / 7
    p = write_matrix(tmp_path / "m.csv", rows, cols, vals)
    r, c, v = read_matrix(p)
    assert np.array_equal(r, rows) and np.array_equal(c, cols) and np.array_equal(v, vals)
    with pytest.raises(ValueError):
        write_matrix(tmp_path / "bad.csv", rows, cols, vals.T)
    with pytest.raises(ValueError):
        write_table(tmp_path / "t.csv", {"a": [1, 2], "b": [1]})


def test_yaml_exponent_floats_and_schema():
    s = parse_scenario("source:\n  preset: kdp-asymmetric\n  beta_p: -4.77e-26\n")
    assert s["source"]["beta_p"] == -4.77e-26
    assert parse_scenario("") == {}
    with pytest.raises(UsageError, match="source"):
        parse_scenario("source:\n  bogus: 1\n")
    with pytest.raises(UsageError, match="theta_deg"):
        parse_scenario("source:\n  crystal: {material: KDP, length_mm: 20, theta_deg: 95}\n")
    with pytest.raises(UsageError):
        parse_scenario("grid: [1, 2")


def test_compensation_override(kdp):
    c = source_config(parse_scenario(SMALL), compensate_crystal_chirp=True)
    assert c.beta_p == pytest.approx(-kdp.coefficients.b_p / 4)
    c2 = source_config(parse_scenario(SMALL), beta_p=1e-26, preset_name="bbo-symmetric")
    assert c2.beta_p == 1e-26 and c2.name == "bbo-symmetric"


@pytest.fixture()
def scenario(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text(SMALL)
    return p


def test_run_is_deterministic(scenario, tmp_path):
    for d in ("a", "b"):
        assert cli.main(["run", str(scenario), "hom", "--out", str(tmp_path / d)]) == 0
    for name in ("hom_summary.json", "hom.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    summary = json.loads((tmp_path / "a" / "hom_summary.json").read_text())
    assert summary["analysis"] == "hom"
    assert summary["provenance"]["grid"]["n"] == 512
    assert summary["results"]["V"] == pytest.approx(summary["results"]["inv_K"], abs=1e-3)


def test_env_output_dir_and_format(scenario, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUT, str(tmp_path / "env"))
    assert cli.main(["run", str(scenario), "suppress", "--format", "json"]) == 0
    r = json.loads((tmp_path / "env" / "suppress_summary.json").read_text())
    assert r["results"]["sigma_tau_i"] == pytest.approx(134, rel=0.01)


def test_exit_codes(scenario, tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "missing.yaml"), "jsa", "--out", str(tmp_path)]) == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text("source: {preset: kdp-asymmetric, beta_p: fast}\n")
    assert cli.main(["run", str(bad), "jsa", "--out", str(tmp_path)]) == 1
    assert "error in config" in capsys.readouterr().err
    assert cli.main(["run", str(scenario), "jsa", "--grid-span", "1e12", "--out", str(tmp_path)]) == 2
    assert "energy capture" in capsys.readouterr().err
    assert cli.main(["run", str(scenario), "jsa", "--preset", "nope", "--out", str(tmp_path)]) == 1


def test_unwritable_output(scenario, tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["run", str(scenario), "suppress", "--out", str(blocker / "sub")]) == 1
    assert "error in output" in capsys.readouterr().err


def test_presets_listing(tmp_path, capsys):
    assert cli.main([]) == 0
    out = capsys.readouterr().out
    assert "kdp-asymmetric" in out and "bbo-symmetric" in out
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert cli.main(["run", str(empty), "jsa"]) == 0
    assert "kdp-asymmetric" in capsys.readouterr().out


def test_jsa_outputs(scenario, tmp_path):
    assert cli.main(["run", str(scenario), "jsa", "--out", str(tmp_path)]) == 0
    rows, cols, vals = read_matrix(tmp_path / "jsi.csv")
    assert vals.shape == (512, 512)
    assert np.all(vals >= 0)
