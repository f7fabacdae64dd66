import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ewlgame import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# --- angle parsing --------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [("0.3927", 0.3927), ("pi", np.pi), ("pi/8", np.pi / 8), ("3pi/8", 3 * np.pi / 8),
     ("3*pi/8", 3 * np.pi / 8), ("-pi/4 + 1", 1 - np.pi / 4), ("π/2", np.pi / 2), ("1e-3", 1e-3)],
)
def test_parse_angle(text, value):
    assert cli.parse_angle(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["", "pi/0", "__import__('os')", "x", "2**3", "pi pi"])
def test_parse_angle_rejects(text):
    with pytest.raises(Exception) as info:
        cli.parse_angle(text)
    assert info.type.__name__ == "ArgumentTypeError"


@settings(max_examples=100, deadline=None)
@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_parse_angle_round_trips_repr(x):
    assert cli.parse_angle(repr(x)) == x


# --- payoff ---------------------------------------------------------------


def test_payoff_pi_over_8(capsys):
    code, out, _ = run(capsys, "payoff", "--theta-a", "0", "--phi-a", "0.3927", "--theta-b", "0", "--phi-b", "0.3927")
    assert code == 0
    a, b = (float(t.split("=")[1]) for t in out.splitlines()[1].split())
    # 0.3927 is pi/8 to four places; the payoff slope there is 2 per radian
    assert (a, b) == pytest.approx((4, 4), abs=1e-5)


def test_payoff_defaults(capsys):
    code, out, _ = run(capsys, "payoff")
    assert code == 0 and "a=5 b=3" in out


def test_payoff_domain_error_names_parameter(capsys):
    code, _, err = run(capsys, "payoff", "--phi-a", "2.0")
    assert code == 2
    assert "phi-a" in err and "pi/2" in err


def test_payoff_bad_game_constants(capsys):
    code, _, err = run(capsys, "payoff", "--alpha", "1")
    assert code == 2 and "alpha > beta > gamma" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["payoff", "--phi-a", "nonsense"])
    assert info.value.code == 2


def test_payoff_json(capsys):
    code, out, _ = run(capsys, "payoff", "--phi-a", "pi/4", "--phi-b", "pi/4", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["alpha"] == 5.0
    assert doc["rows"][0]["payoff_a"] == pytest.approx(3)
    assert doc["rows"][0]["payoff_b"] == pytest.approx(5)


def test_lambda_override(capsys):
    code, out, _ = run(capsys, "payoff", "--lambda", "0", "--phi-a", "pi/4", "--phi-b", "pi/4")
    assert code == 0 and "a=5 b=3" in out


def test_config_file_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "game.cfg"
    conf.write_text("# custom game\nalpha = 7\nbeta = 4\nlambda = pi/2\nformat = csv\n")
    code, out, _ = run(capsys, "payoff", "--config", str(conf))
    assert code == 0
    assert float(rows(out)[0]["payoff_a"]) == pytest.approx(7)
    code, out, _ = run(capsys, "payoff", "--config", str(conf), "--alpha", "9")
    assert float(rows(out)[0]["payoff_a"]) == pytest.approx(9)


def test_config_file_errors(tmp_path, capsys):
    conf = tmp_path / "bad.cfg"
    conf.write_text("delta = 2\n")
    assert run(capsys, "payoff", "--config", str(conf))[0] == 2
    conf.write_text("alpha 2\n")
    assert run(capsys, "payoff", "--config", str(conf))[0] == 2
    assert run(capsys, "payoff", "--config", str(tmp_path / "missing.cfg"))[0] == 1


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "table", "classical", "--output", str(target))
    assert code == 0 and out == ""
    assert rows(target.read_text())[1]["O_display"] == "(5.0, 3.0)"


# --- tables ---------------------------------------------------------------


def test_table_classical_structure(capsys):
    _, out, _ = run(capsys, "table", "classical")
    t = {r["alice"]: r for r in rows(out)}
    assert (t["T"]["T_display"], t["T"]["O_display"]) == ("(3.0, 5.0)", "(1.0, 1.0)")
    assert (t["O"]["T_display"], t["O"]["O_display"]) == ("(1.0, 1.0)", "(5.0, 3.0)")


def test_table_bimatrix(capsys):
    from test_analysis import BIMATRIX_DISPLAY

    _, out, _ = run(capsys, "table", "bimatrix")
    table = rows(out)
    labels = ["T", "O", "U(0,pi/8)", "U(0,3pi/8)", "Q"]
    assert [r["alice"] for r in table] == labels
    for r, want in zip(table, BIMATRIX_DISPLAY):
        assert [r[f"{c}_display"] for c in labels] == [f"({a:.1f}, {b:.1f})" for a, b in want]


def test_table_theory_column(capsys):
    _, out, _ = run(capsys, "table", "theory-column")
    got = [(float(r["payoff_a"]), float(r["payoff_b"])) for r in rows(out)]
    assert np.allclose(got, [(3, 5), (2.5, 2.5), (5, 3), (4, 4), (3, 5), (4, 4), (5, 3)])


# --- sweeps ---------------------------------------------------------------


def test_sweep_composite_diag(capsys):
    code, out, _ = run(capsys, "sweep", "--composite-diag", "101")
    r = rows(out)
    assert code == 0 and len(r) == 101
    assert (float(r[0]["payoff_a"]), float(r[0]["payoff_b"])) == pytest.approx((3, 5))
    assert (float(r[-1]["payoff_a"]), float(r[-1]["payoff_b"])) == pytest.approx((5, 3))
    assert {"theta_a", "phi_a", "theta_b", "phi_b", "lambda", "payoff_a", "payoff_b"} <= set(r[0])


def test_sweep_surface(capsys):
    code, out, _ = run(capsys, "sweep", "--fig6", "--phi-b", "0.7854", "--theta-b", "1.5708", "--points", "51")
    r = rows(out)
    assert code == 0 and len(r) == 51 * 51
    best = max(r, key=lambda x: float(x["payoff_b"]))
    assert float(best["theta_a"]) == pytest.approx(np.pi / 2)
    assert float(best["phi_a"]) == pytest.approx(np.pi / 4)


def test_sweep_corner_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--axis", "theta_a:0:pi:pi", "--axis", "theta_b:0:pi:pi")
    got = [(float(x["payoff_a"]), float(x["payoff_b"])) for x in rows(out)]
    assert code == 0
    assert np.allclose(got, [(5, 3), (1, 1), (1, 1), (3, 5)])


def test_sweep_fixed_and_point_count(capsys):
    code, out, _ = run(capsys, "sweep", "--axis", "phi_a:0:pi/2:n5", "--fixed", "phi_b=pi/8")
    r = rows(out)
    assert code == 0 and len(r) == 5
    assert all(float(x["phi_b"]) == pytest.approx(np.pi / 8) for x in r)


@pytest.mark.parametrize(
    "argv",
    [["--axis", "theta_a:0:pi"], ["--axis", "omega:0:1:0.1"], ["--axis", "theta_a:0:1:0"],
     ["--fixed", "theta_b"], []],
)
def test_sweep_malformed(argv, capsys):
    assert run(capsys, "sweep", *argv)[0] == 2


def test_sweep_tangent_contour(capsys):
    code, out, _ = run(capsys, "sweep", "--tangent-contour", "--points", "11")
    r = rows(out)
    assert code == 0 and r
    for x in r:
        assert float(x["tan_product"]) == pytest.approx(float(x["level"]))


# --- analyze --------------------------------------------------------------


def test_analyze_families(capsys):
    code, out, _ = run(capsys, "analyze", "families", "--format", "csv")
    got = [(float(r["payoff_a"]), float(r["payoff_b"])) for r in rows(out)]
    assert code == 0
    assert np.allclose(got, [(4, 4), (4, 4), (3, 5), (2.5, 2.5), (2.5, 2.5)])


def test_analyze_pareto(capsys):
    code, out, _ = run(capsys, "analyze", "pareto", "--format", "csv")
    r = rows(out)
    assert code == 0
    assert float(r[0]["d_a_d_phi_a"]) == pytest.approx(-2, abs=1e-6)
    assert float(r[1]["d_b_d_phi_b"]) == pytest.approx(-2, abs=1e-6)
    assert float(r[2]["d_a_d_theta_a"]) == pytest.approx(-0.5, abs=1e-6)


def test_analyze_threshold(capsys):
    code, out, _ = run(capsys, "analyze", "threshold", "--step", "0.0491", "--format", "json")
    feasible = json.loads(out)["rows"]
    first = min(r["lambda"] for r in feasible if r["feasible"])
    assert code == 0
    assert abs(first - np.pi / 4) <= 0.0491


def test_analyze_nash(capsys):
    code, out, _ = run(capsys, "analyze", "nash", "--grid-n", "41", "--format", "csv")
    by = {r["profile"]: r for r in rows(out)}
    assert code == 0
    assert by["T vs T"]["grid_nash"] == "true"
    assert by["O vs O"]["grid_nash"] == "false"
    assert by["U(0,pi/8) vs U(0,pi/8)"]["grid_nash"] == "false"
    assert all(r["grid_nash"] == "true" for k, r in by.items() if k.startswith("theta=pi/2"))


# --- pulse ----------------------------------------------------------------


def pulse_rows(capsys, *argv):
    code, out, err = run(capsys, "pulse", "--format", "csv", *argv)
    return code, {r["outcome"]: float(r["population"]) for r in rows(out)}, err


def test_pulse_television(capsys):
    code, pops, _ = pulse_rows(capsys, "--theta-a", "pi", "--theta-b", "pi")
    assert code == 0
    assert [pops[k] for k in ("OO", "OT", "TO", "TT")] == pytest.approx([0, 0, 0, 1], abs=1e-6)


def test_pulse_bell(capsys):
    code, pops, _ = pulse_rows(capsys, "--phi-a", "pi/8", "--phi-b", "pi/8")
    assert code == 0
    assert [pops[k] for k in ("OO", "OT", "TO", "TT")] == pytest.approx([0.5, 0, 0, 0.5], abs=1e-6)


def test_pulse_without_entanglement(capsys):
    code, pops, _ = pulse_rows(capsys, "--lambda", "0")
    assert code == 0 and pops["OO"] == pytest.approx(1, abs=1e-6)


def test_pulse_text_and_sequence_file(tmp_path, capsys):
    from ewlgame import nmr

    target = tmp_path / "seq.txt"
    code, out, _ = run(capsys, "pulse", "--phi-a", "pi/8", "--sequence-out", str(target))
    assert code == 0
    assert out.startswith("RF both -x")
    fid = [line for line in out.splitlines() if line.startswith("fidelity")]
    assert float(fid[0].split()[1]) >= 1 - 1e-6
    # two 5-event entanglers around one 4-event composite block
    assert len(nmr.parse_sequence(target.read_text())) == 14


def test_pulse_prescribed_layout_warns(capsys):
    code, _, err = run(capsys, "pulse", "--theta-a", "1", "--phi-a", "0.5", "--layout", "prescribed")
    assert code == 0 and "warning" in err


def test_pulse_symmetric_layout_exact(capsys):
    code, out, err = run(capsys, "pulse", "--theta-a", "1", "--phi-a", "0.5", "--theta-b", "2", "--phi-b", "0.3")
    assert code == 0 and err == ""


def test_inconsistency_exit_code(capsys, monkeypatch):
    from ewlgame import protocol

    real = cli.outcome_probabilities_circuit

    def skewed(sa, sb, cfg):
        p = real(sa, sb, cfg)
        return protocol.OutcomeProbabilities(p.p_oo - 1e-6, p.p_ot + 1e-6, p.p_to, p.p_tt)

    monkeypatch.setattr(cli, "outcome_probabilities_circuit", skewed)
    code, _, err = run(capsys, "payoff")
    assert code == 1 and "inconsistency" in err


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "ewlgame.cli", "payoff"], capture_output=True, text=True)
    assert out.returncode == 0 and "a=5 b=3" in out.stdout
