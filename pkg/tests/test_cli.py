import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from superdiscord import cli, fixtures
from superdiscord import correlations as corr
from superdiscord import magnetics as mg


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out)
    return code, out.getvalue()


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.fixture
def iron_csv(tmp_path):
    path = tmp_path / "iron.csv"
    path.write_text(fixtures.fixture_text("iron_nitrosyl_synthetic.csv"), encoding="utf-8")
    return str(path)


class TestFormatting:
    def test_fmt(self):
        assert cli.fmt(1 / 3) == "0.333333333333"
        assert cli.fmt(-1.0) == "-1"
        assert cli.fmt(1e-20) == "1e-20"

    def test_x_label(self):
        assert cli.x_label(math.inf) == "inf"
        assert cli.x_label(0.5) == "0.5"
        assert cli.x_label(2.0) == "2"

    def test_x_list(self):
        assert cli.parse_x_list("0.5, inf") == [0.5, math.inf]
        assert tuple(cli.parse_x_list("")) == cli.DEFAULT_X
        assert tuple(cli.parse_x_list(None)) == cli.DEFAULT_X

    @pytest.mark.parametrize("text", ["-1", "abc", "nan", "1,,2"])
    def test_bad_x(self, text):
        with pytest.raises(cli.UsageError):
            cli.parse_x_list(text)

    def test_range(self):
        assert cli.parse_range("5:300:60") == (5.0, 300.0, 60)
        np.testing.assert_allclose(cli.parse_temperatures("1:100:3", log=True), [1, 10, 100])

    @pytest.mark.parametrize("text", ["5:300", "5:300:1", "300:5:10", "0:5:10", "a:b:c"])
    def test_bad_temperatures(self, text):
        with pytest.raises(cli.UsageError):
            cli.parse_temperatures(text)


class TestSweep:
    def test_iron_parameters(self):
        code, text = run(["sweep", "--j-over-kb", "-68", "--g", "2", "--t", "5:300:60",
                          "--x", "0.5,1.0,1.5,inf"])
        assert code == 0
        header = text.splitlines()[0]
        assert header == ("T_K,G,I_bits,D_bits,Dw_x=0.5_bits,Dw_x=1_bits,"
                          "Dw_x=1.5_bits,Dw_x=inf_bits")
        data = rows(text)
        assert len(data) == 60
        for r in data:
            assert abs(float(r["Dw_x=inf_bits"]) - float(r["D_bits"])) <= 1e-10
        assert float(data[0]["T_K"]) == 5.0 and float(data[-1]["T_K"]) == 300.0

    def test_copper_ordering(self):
        code, text = run(["sweep", "--j-over-kb", "35.4", "--g", "2.13", "--t", "5:300:60",
                          "--x", "0.5,inf"])
        assert code == 0
        for r in rows(text):
            assert float(r["Dw_x=0.5_bits"]) >= float(r["D_bits"])

    def test_values_are_closed_forms(self):
        _, text = run(["sweep", "--j-over-kb", "-68", "--t", "10:20:2", "--x", "1"])
        r = rows(text)[0]
        g = mg.spin_correlation(mg.DimerModel(-68.0), 10.0)
        assert float(r["G"]) == pytest.approx(g, rel=1e-11)
        assert float(r["Dw_x=1_bits"]) == pytest.approx(corr.super_discord_closed_form(g, 1.0), rel=1e-11)

    def test_single_step_rejected(self, capsys):
        code, _ = run(["sweep", "--j-over-kb", "-68", "--t", "5:300:1"])
        assert code == 2
        assert "superdiscord: error:" in capsys.readouterr().err

    @pytest.mark.parametrize("argv", [
        ["sweep", "--t", "5:300:10"],
        ["sweep", "--j-over-kb", "-68"],
        ["sweep", "--j-over-kb", "-68", "--t", "5:300:10", "--x", "-1"],
        ["sweep", "--j-over-kb", "-68", "--t", "5:300:10", "--g", "0"],
        ["sweep", "--j-over-kb", "1e6", "--t", "5:300:10"],
        ["bogus"],
    ])
    def test_usage_errors(self, argv):
        assert run(argv)[0] == 2

    def test_log_spacing(self):
        _, text = run(["sweep", "--j-over-kb", "-68", "--t", "1:100:3", "--log", "--x", "inf"])
        assert [r["T_K"] for r in rows(text)] == ["1", "10", "100"]


class TestFromChi:
    def test_fixture_roundtrip(self, iron_csv):
        code, text = run(["from-chi", iron_csv, "--g", "2", "--x", "0.5,inf"])
        assert code == 0
        data = rows(text)
        assert len(data) == len(fixtures.FIXTURE_TEMPERATURES)
        for r in data:
            g = mg.spin_correlation(fixtures.IRON_NITROSYL, float(r["T_K"]))
            assert abs(float(r["G"]) - g) <= 1e-10
            assert r["error"] == ""

    def test_unphysical_row_flagged(self, tmp_path):
        chi = 1.5 * mg.curie_susceptibility(2.0, 10.0)
        good = mg.susceptibility(mg.DimerModel(-10.0), 20.0)
        path = tmp_path / "bad.csv"
        path.write_text(f"temperature_K,chi_emu_per_mol\n10,{chi!r}\n20,{good!r}\n")
        code, text = run(["from-chi", str(path), "--x", "1"])
        assert code == 0
        first, second = rows(text)
        assert first["error"] == "OutOfPhysicalRange"
        assert float(first["G"]) == pytest.approx(0.5, abs=1e-12)
        assert first["D_bits"] == ""
        assert second["error"] == ""

    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# nothing yet\ntemperature_K,chi_emu_per_mol\n")
        code, text = run(["from-chi", str(path)])
        assert code == 0
        assert text.splitlines() == [
            "T_K,chi,G,I_bits,D_bits,Dw_x=0_bits,Dw_x=0.5_bits,Dw_x=1_bits,Dw_x=2_bits,Dw_x=inf_bits,error"
        ]

    def test_malformed_header(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("T,chi\n5,0.1\n")
        assert run(["from-chi", str(path)])[0] == 2
        assert "InvalidDataset" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["from-chi", str(tmp_path / "missing.csv")])[0] == 2


class TestFit:
    @pytest.mark.parametrize("name,j,g", [
        ("iron_nitrosyl_synthetic.csv", -68.0, 2.0),
        ("copper_acetate_synthetic.csv", 35.4, 2.13),
    ])
    def test_noise_free_fixtures(self, name, j, g):
        code, text = run(["fit", str(fixtures.fixture_path(name))])
        assert code == 0
        payload = json.loads(text)
        assert set(payload) == {"model", "cost", "converged", "iterations", "residuals"}
        assert set(payload["model"]) == {"j_over_kb_K", "g", "impurity_fraction", "tip_emu_per_mol"}
        assert payload["model"]["j_over_kb_K"] == pytest.approx(j, abs=0.01)
        assert payload["model"]["g"] == pytest.approx(g, abs=0.001)
        assert payload["converged"] is True
        assert len(payload["residuals"]) == len(fixtures.FIXTURE_TEMPERATURES)

    def test_two_points(self, tmp_path, capsys):
        path = tmp_path / "two.csv"
        path.write_text("temperature_K,chi_emu_per_mol\n5,0.01\n10,0.02\n")
        assert run(["fit", str(path)])[0] == 2
        assert "InsufficientData" in capsys.readouterr().err

    def test_unconverged_still_succeeds(self):
        path = str(fixtures.fixture_path("copper_acetate_synthetic_noise1pct.csv"))
        code, text = run(["fit", path, "--max-iter", "2", "--starts", "1"])
        assert code == 0
        assert json.loads(text)["converged"] is False

    def test_bad_free_parameter(self):
        path = str(fixtures.fixture_path("copper_acetate_synthetic.csv"))
        assert run(["fit", path, "--free", "j_over_kb,spin"])[0] == 2


class TestOracle:
    def test_core_run(self):
        code, text = run(["oracle", "--g", "-0.9:0.3:13", "--x", "0,1,inf"])
        assert code == 0
        last = text.splitlines()[-1]
        assert last.endswith("PASS")
        assert float(last.split()[0].split("=")[1]) <= 1e-8

    def test_impossible_tolerance(self):
        code, text = run(["oracle", "--g", "-0.5:0.2:2", "--x", "1", "--tolerance", "1e-30"])
        assert code == 1
        assert text.splitlines()[-1].endswith("FAIL")

    def test_empty_x_uses_defaults(self):
        code, text = run(["oracle", "--g", "-0.5:-0.5:1", "--x", ""])
        assert code == 0
        labels = [ln.split()[1] for ln in text.splitlines() if " x=" in ln]
        assert labels == ["x=0", "x=0.5", "x=1", "x=2", "x=inf"]

    def test_grid_outside_domain(self):
        assert run(["oracle", "--g", "-0.5:0.5:3"])[0] == 2


class TestConfig:
    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"j_over_kb": -68, "t": "5:300:4", "x": "0.5"}))
        _, from_file = run(["sweep", "--config", str(cfg)])
        assert len(rows(from_file)) == 4
        _, overridden = run(["sweep", "--config", str(cfg), "--t", "5:300:7"])
        assert len(rows(overridden)) == 7
        assert "Dw_x=0.5_bits" in overridden.splitlines()[0]

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"j_over_kb": -68, "temperature": 3}))
        assert run(["sweep", "--config", str(cfg), "--t", "5:300:4"])[0] == 2

    def test_unreadable(self, tmp_path):
        assert run(["sweep", "--config", str(tmp_path / "none.json")])[0] == 2


class TestDeterminism:
    def test_byte_identical(self):
        argv = ["sweep", "--j-over-kb", "35.4", "--g", "2.13", "--t", "5:300:20"]
        assert run(argv)[1] == run(argv)[1]

    def test_fit_byte_identical(self):
        argv = ["fit", str(fixtures.fixture_path("copper_acetate_synthetic_noise1pct.csv"))]
        assert run(argv)[1] == run(argv)[1]

    def test_synth_reproduces_fixture_values(self):
        code, text = run(["synth", "--j-over-kb", "-68", "--g", "2", "--t", "5:300:30"])
        assert code == 0
        ours = [ln for ln in text.splitlines() if not ln.startswith("#")]
        shipped = [ln for ln in fixtures.fixture_text("iron_nitrosyl_synthetic.csv").splitlines()
                   if not ln.startswith("#")]
        assert ours == shipped


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "superdiscord", "sweep", "--j-over-kb", "-68",
         "--t", "5:300:3", "--x", "inf"],
        capture_output=True,
    )
    assert proc.returncode == 0
    assert b"\r" not in proc.stdout
    assert proc.stdout.count(b"\n") == 4


def test_module_entry_point_error():
    proc = subprocess.run(
        [sys.executable, "-m", "superdiscord", "sweep", "--j-over-kb", "-68", "--t", "5:300:1"],
        capture_output=True, text=True, env=dict(os.environ, NO_COLOR="1"),
    )
    assert proc.returncode == 2
    assert proc.stderr.startswith("superdiscord: error:")
