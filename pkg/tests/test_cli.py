import json

import numpy as np
import pytest

from springlinkage.cli import main, parse_component
from springlinkage.errors import ConfigurationError
from springlinkage.io import from_csv, from_json


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def test_vertical_force_curve_final_row(tmp_path):
    code, out = run(tmp_path, "force-curve", "--model", "vertical", "--theta-ini", "179.9", "--theta-end", "0")
    assert code == 0
    t = from_csv(out.read_text())
    last = t.records()[-1]
    assert last["F_over_Fmax"] == pytest.approx(1.0)
    assert last["EPE_over_Fmax_d"] == pytest.approx(0.50, abs=0.002)
    assert len(t.rows) == 1000
    assert t.params["model"] == "vertical"


def test_rotational_force_curve_energy(tmp_path):
    code, out = run(tmp_path, "force-curve", "--model", "rotational", "--kr", "0.3")
    assert code == 0
    assert from_csv(out.read_text()).records()[-1]["EPE_over_Fmax_d"] == pytest.approx(0.785, abs=0.002)


def test_horizontal_peak_row(tmp_path):
    code, out = run(tmp_path, "force-curve", "--model", "horizontal", "--theta-ini", "152", "--fmax", "10")
    t = from_csv(out.read_text())
    f = np.array(t.column("F_c_n"))
    assert t.column("theta_deg")[int(np.argmax(f))] == pytest.approx(103.0, abs=0.5)
    assert f.max() == pytest.approx(10.0, rel=1e-5)


def test_identical_runs_are_byte_identical(tmp_path):
    argv = ["force-curve", "--model", "C", "--gamma", "0.3", "--points", "200", "--format", "json"]
    _, a = run(tmp_path, *argv, name="a.json")
    _, b = run(tmp_path, *argv, name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_json_output_round_trips(tmp_path):
    _, out = run(tmp_path, "force-curve", "--model", "B", "--gamma", "0.25", "--format", "json", name="p.json")
    text = out.read_text()
    t = from_json(text)
    assert json.loads(text)["columns"][0] == "theta_deg"
    _, csv_out = run(tmp_path, "force-curve", "--model", "B", "--gamma", "0.25")
    assert from_csv(csv_out.read_text()).rows == t.rows


def test_svg_output(tmp_path):
    code, out = run(tmp_path, "force-curve", "--model", "vertical", "--points", "50", "--format", "svg",
                    name="p.svg")
    assert code == 0 and out.read_text().lstrip().startswith("<?xml")


def test_sweep_rows_and_gaps(tmp_path):
    code, out = run(tmp_path, "sweep", "--model", "A", "--gammas", "0,0.5,0.8")
    assert code == 0
    rows = {r["gamma"]: r for r in from_csv(out.read_text()).records()}
    assert rows[0.0]["normalized_energy"] == pytest.approx(0.50, abs=0.005)
    assert rows[0.5]["normalized_energy"] is None
    assert rows[0.8]["normalized_energy"] == pytest.approx(0.62, abs=0.005)
    assert rows[0.8]["normalized_stiffness"] == pytest.approx(3.45, abs=0.01)


def test_sweep_model_b_midpoint_equals_horizontal(tmp_path):
    _, out = run(tmp_path, "sweep", "--model", "B", "--gamma", "0.5")
    _, h = run(tmp_path, "force-curve", "--model", "horizontal", "--fmax", "1", name="h.csv")
    b = from_csv(out.read_text()).records()[0]["normalized_energy"]
    assert b == pytest.approx(from_csv(h.read_text()).records()[-1]["EPE_over_Fmax_d"], rel=1e-9)


def test_compose_vertical_and_horizontal(tmp_path):
    code, out = run(tmp_path, "compose", "--component", "vertical", "--component", "horizontal", "--fmax", "1")
    assert code == 0
    t = from_csv(out.read_text())
    assert t.records()[-1]["EPE_over_Fmax_d"] == pytest.approx(1.0, abs=0.01)
    assert any(n.startswith("force_cv:") for n in t.notes)
    assert "F_1_n" in t.columns


def test_single_component_compose_matches_force_curve(tmp_path):
    _, c = run(tmp_path, "compose", "--component", "vertical", name="c.csv")
    _, f = run(tmp_path, "force-curve", "--model", "vertical", name="f.csv")
    tc, tf = from_csv(c.read_text()), from_csv(f.read_text())
    for col in tf.columns:
        assert tc.column(col) == tf.column(col)


def test_compose_optimize_rotational_horizontal(tmp_path):
    code, out = run(tmp_path, "compose", "--component", "rotational", "--component", "horizontal", "--optimize")
    assert code == 0
    assert from_csv(out.read_text()).records()[-1]["EPE_over_Fmax_d"] == pytest.approx(0.97, abs=0.01)


@pytest.mark.parametrize("argv", [
    ["--model", "vertical"],
    ["--model", "horizontal", "--k", "200", "--theta-ini", "164", "--theta-end", "44"],
    ["--model", "rotational", "--kr", "0.7", "--theta-ini", "178", "--theta-end", "28"],
    ["--model", "A", "--gamma", "0.999"],
    ["--model", "C", "--gamma", "0.25", "--count", "2"],
])
def test_verify_passes(tmp_path, argv):
    code, out = run(tmp_path, "verify", *argv)
    assert code == 0
    assert "# verdict: pass" in out.read_text()


def test_verify_reports_principal_branch_for_model_a(tmp_path):
    _, out = run(tmp_path, "verify", "--model", "A", "--gamma", "0.9")
    t = from_csv(out.read_text())
    assert "principal_branch_relative_error" in t.columns
    assert max(t.column("principal_branch_relative_error")) > 1e-3


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    import springlinkage.cli as cli
    original = cli.charging_force
    monkeypatch.setattr(cli, "charging_force", lambda *a: 1.001 * original(*a))
    code, out = run(tmp_path, "verify", "--model", "B", "--gamma", "0.3")
    assert code == 4
    assert "# verdict: FAIL" in out.read_text()


def test_predict_bundled(tmp_path):
    code, out = run(tmp_path, "predict")
    assert code == 0
    rows = {r["name"]: r for r in from_csv(out.read_text()).records()}
    assert rows["Hybrid"]["h_improved_over_d"] == pytest.approx(172, abs=3)
    assert rows["Hybrid"]["improvement_percent"] == pytest.approx(56.25)
    assert rows["CLOVER"]["diagnostic"].startswith("insufficient data")


def test_predict_empty_and_malformed_catalogues(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("name,mass_kg,f_max_n,d_m,energy_fraction,v_to_mps,source\n")
    code, out = run(tmp_path, "predict", "--catalogue", str(empty))
    assert code == 0 and from_csv(out.read_text()).rows == []
    bad = tmp_path / "bad.csv"
    bad.write_text("name,mass_kg,f_max_n,d_m,energy_fraction,v_to_mps,source\nx,heavy,,,,,s\n")
    code, _ = run(tmp_path, "predict", "--catalogue", str(bad))
    assert code == 2
    assert "row 2" in capsys.readouterr().err


@pytest.mark.parametrize("argv,code", [
    (["force-curve", "--model", "Q"], 2),
    (["force-curve", "--model", "vertical", "--kr", "1"], 2),
    (["force-curve", "--model", "vertical", "--gamma", "0.2"], 2),
    (["force-curve", "--model", "A"], 2),
    (["force-curve", "--model", "vertical", "--theta-ini", "190"], 2),
    (["force-curve", "--model", "vertical", "--points", "1"], 2),
    (["force-curve", "--model", "A", "--gamma", "0.5", "--fmax", "1"], 3),
    (["force-curve", "--model", "B", "--gamma", "0"], 3),
    (["sweep", "--model", "vertical"], 2),
    (["compose"], 2),
    (["predict", "--g", "-1"], 2),
    (["nonsense"], 2),
])
def test_exit_codes(tmp_path, argv, code, capsys):
    assert main(argv + ["--out", str(tmp_path / "x")]) == code


def test_singular_diagnostic_names_angle(capsys):
    from springlinkage.cli import main as cli_main
    assert cli_main(["force-curve", "--model", "B", "--gamma", "1"]) == 3
    assert "singular" in capsys.readouterr().err


def test_parse_component():
    spec = parse_component("A:gamma=0.3:k=2:count=3")
    assert (spec.kind, spec.gamma, spec.stiffness, spec.count) == ("A", 0.3, 2.0, 3)
    with pytest.raises(ConfigurationError):
        parse_component("A:colour=red")
    with pytest.raises(ConfigurationError):
        parse_component("A:gamma=x")
