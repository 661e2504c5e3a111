import json
import math

import numpy as np
import pytest

from sshscatter.cli import run


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestSpectrumCommand:
    def test_dip_sits_at_resonance(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        code = run([
            "--out", str(out), "spectrum",
            "--config", "A", "--g", "0.2", "--omega-rabi", "0",
            "--delta", "0.5", "--omega-e", "1.5",
            "--dk-min", "-0.2", "--dk-max", "0.2", "--dk-steps", "401",
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["delta_k", "T", "R", "re_t", "im_t"]
        assert len(rows) == 401
        t_vals = np.array([float(r[1]) for r in rows])
        dk_vals = np.array([float(r[0]) for r in rows])
        assert abs(dk_vals[int(np.argmin(t_vals))]) < 1e-12
        assert np.all(t_vals >= 0.0)
        assert np.all(t_vals <= 1.0 + 1e-12)
        assert np.max(np.abs(t_vals + np.array([float(r[2]) for r in rows]) - 1)) < 1e-10

    def test_json_format(self, tmp_path):
        out = tmp_path / "spectrum.json"
        code = run([
            "--out", str(out), "--format", "json", "spectrum",
            "--config", "AB", "--alpha", "0.5", "--dk-steps", "11",
        ])
        assert code == 0
        rows = json.loads(out.read_text())
        assert len(rows) == 11
        assert set(rows[0]) == {"delta_k", "T", "R", "re_t", "im_t"}

    def test_lower_band(self, tmp_path):
        out = tmp_path / "spectrum.csv"
        code = run([
            "--out", str(out), "spectrum",
            "--config", "B", "--omega-e", "-1.5", "--band", "lower",
            "--omega-rabi", "0.1", "--dk-steps", "51",
        ])
        assert code == 0
        header, rows = read_csv(out)
        t_plus_r = [float(r[1]) + float(r[2]) for r in rows]
        assert all(abs(v - 1.0) < 1e-10 for v in t_plus_r)

    def test_bad_grid_is_usage_error(self):
        assert run(["spectrum", "--config", "A", "--dk-steps", "1"]) == 2
        assert run(["spectrum", "--config", "A", "--dk-min", "0.2",
                    "--dk-max", "-0.2"]) == 2


class TestWindingCommand:
    def test_topological_value(self, tmp_path):
        out = tmp_path / "w.json"
        assert run(["--out", str(out), "winding", "--delta", "-0.5"]) == 0
        payload = json.loads(out.read_text())
        assert payload["delta"] == -0.5
        assert payload["nu"] == 1
        assert payload["zak_phase"] == pytest.approx(math.pi, rel=1e-11)

    def test_trivial_value(self, tmp_path):
        out = tmp_path / "w.json"
        assert run(["--out", str(out), "winding", "--delta", "0.5"]) == 0
        payload = json.loads(out.read_text())
        assert payload["nu"] == 0
        assert payload["zak_phase"] == 0.0

    def test_gapless_is_usage_error(self, tmp_path):
        assert run(["winding", "--delta", "0"]) == 2


class TestBandsCommand:
    def test_csv_columns(self, tmp_path):
        out = tmp_path / "bands.csv"
        assert run(["--out", str(out), "bands", "--delta", "0.5", "--k-steps", "41"]) == 0
        header, rows = read_csv(out)
        assert header == ["k", "omega_upper", "omega_lower", "dx", "dy"]
        assert len(rows) == 41
        for row in rows:
            w_up, w_lo = float(row[1]), float(row[2])
            assert w_up == pytest.approx(-w_lo)
            assert 1.0 - 1e-9 <= w_up <= 2.0 + 1e-9
            assert math.hypot(float(row[3]), float(row[4])) == pytest.approx(w_up, abs=1e-10)


class TestPolesCommand:
    def test_payload_fields(self, tmp_path):
        out = tmp_path / "poles.json"
        code = run([
            "--out", str(out), "poles",
            "--config", "AB", "--alpha", "0.5", "--g", "0.2",
            "--omega-rabi", "0.4", "--delta", "0.5", "--omega-e", "1.5",
        ])
        assert code == 0
        payload = json.loads(out.read_text())
        assert set(payload) == {"pole_plus", "pole_minus", "regime", "ratio", "lamb_shift"}
        assert payload["lamb_shift"] == pytest.approx(1.0 / 150.0, rel=1e-10)
        assert payload["regime"] in {"lorentzian", "eit", "ats"}
        assert len(payload["pole_plus"]) == 2


class TestFeaturesCommand:
    def test_ats_doublet(self, tmp_path):
        out = tmp_path / "features.json"
        code = run([
            "--out", str(out), "features",
            "--config", "A", "--g", "0.2", "--omega-rabi", "0.4",
            "--delta", "0.5", "--omega-e", "1.5",
            "--dk-min", "-0.35", "--dk-max", "0.35", "--dk-steps", "7001",
        ])
        assert code == 0
        feats = json.loads(out.read_text())
        dips = [f for f in feats if f["kind"] == "dip"]
        assert len(dips) == 2
        assert dips[0]["position"] == pytest.approx(-0.2, abs=5e-3)
        assert dips[1]["position"] == pytest.approx(0.2, abs=5e-3)


class TestContourCommand:
    def test_columns_and_range(self, tmp_path):
        out = tmp_path / "contour.csv"
        code = run([
            "--out", str(out), "contour",
            "--config", "A", "--g", "0.2", "--delta", "0.5", "--omega-e", "1.5",
            "--dk-steps", "21", "--omega-rabi-min", "0",
            "--omega-rabi-max", "0.2", "--omega-rabi-steps", "3",
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["delta_k", "omega_rabi", "T"]
        assert len(rows) == 63
        assert all(0.0 <= float(r[2]) <= 1.0 + 1e-12 for r in rows)


class TestValidateCommand:
    def test_quick_agreement_suite_passes(self, tmp_path):
        out = tmp_path / "report.json"
        code = run([
            "--out", str(out), "validate",
            "--draws", "3", "--n-cells", "24", "--skip-wavepacket",
        ])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert report["n_cases"] == 9
        assert report["max_abs_error_closed_vs_matrix"] < 1e-10
        assert report["max_abs_error_closed_vs_lattice"] < 1e-10

    def test_csv_format_rejected(self):
        assert run(["--format", "csv", "validate", "--skip-wavepacket"]) == 2

    def test_full_suite_with_wavepackets(self, tmp_path):
        # default chain sizes: the two-site resonant case needs the full
        # length for its ringdown, so only the draw count is reduced here
        out = tmp_path / "report.json"
        code = run([
            "--out", str(out), "validate", "--draws", "2", "--n-cells", "24",
        ])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["passed"] is True
        assert len(report["wavepacket_cases"]) == 9
        assert report["max_wavepacket_diff"] < 2e-2


class TestParamFileAndErrors:
    def test_param_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "params.json"
        cfg.write_text(json.dumps({"delta": 0.5, "config": "A", "g": 0.1}))
        out = tmp_path / "w.json"
        code = run(["--params", str(cfg), "--out", str(out), "winding", "--delta", "-0.5"])
        assert code == 0
        assert json.loads(out.read_text())["nu"] == 1  # flag wins over file

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "params.json"
        cfg.write_text(json.dumps({"coupling": 0.2}))
        assert run(["--params", str(cfg), "winding"]) == 2

    def test_missing_file_is_io_error(self, tmp_path):
        assert run(["--params", str(tmp_path / "nope.json"), "winding"]) == 2

    def test_unknown_flag_is_usage_error(self, capsys):
        assert run(["spectrum", "--frobnicate", "1"]) == 2

    def test_out_of_range_delta_is_usage_error(self):
        assert run(["winding", "--delta", "1.5"]) == 2

    def test_empty_sweep_is_usage_error(self):
        assert run([
            "spectrum", "--config", "A", "--omega-e", "0.2",
            "--dk-min", "-0.01", "--dk-max", "0.01", "--dk-steps", "5",
        ]) == 2


class TestDeterminism:
    def test_repeated_runs_byte_identical(self, tmp_path):
        argv_sets = [
            ["spectrum", "--config", "AB", "--alpha", "0.3", "--omega-rabi", "0.05",
             "--dk-steps", "101"],
            ["winding", "--delta", "-0.5"],
            ["poles", "--config", "A", "--omega-rabi", "0.2"],
            ["--format", "json", "bands", "--k-steps", "31"],
        ]
        for i, argv in enumerate(argv_sets):
            a = tmp_path / f"a{i}.out"
            b = tmp_path / f"b{i}.out"
            assert run(["--out", str(a)] + argv) == 0
            assert run(["--out", str(b)] + argv) == 0
            assert a.read_bytes() == b.read_bytes()
