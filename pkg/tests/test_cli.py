"""Command-line surface: formats, exit codes, determinism, validation."""

import json
import math

import pytest

from compfade.cli import main


def parse_csv_curve(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    assert lines[0] == "x,value"
    xs, vs, atoms, meta = [], [], [], {}
    for line in lines[1:]:
        if line.startswith("#atom,"):
            _, loc, mass = line.split(",")
            atoms.append((float(loc), float(mass)))
        elif line.startswith("#meta,"):
            _, key, value = line.split(",", 2)
            meta[key] = value
        else:
            x, v = line.split(",")
            xs.append(float(x))
            vs.append(float(v))
    return xs, vs, atoms, meta


class TestPdfCommand:
    def test_csv_output_roundtrip(self, tmp_path):
        out = tmp_path / "curve.csv"
        code = main(
            [
                "pdf", "--model", "akm-gamma", "--alpha", "1.5", "--mu", "2.1",
                "--kappa", "1", "--b", "1.1", "--omega", "0.9",
                "--grid", "0.01:4:200", "--series-n", "160", "--out", str(out),
            ]
        )
        assert code == 0
        xs, vs, atoms, _ = parse_csv_curve(out.read_text())
        assert len(xs) == 200
        assert all(v >= 0.0 for v in vs)
        assert all(b > a for a, b in zip(xs, xs[1:]))
        assert atoms == []
        # 17-significant-digit floats round-trip exactly.
        first = out.read_text().splitlines()[1].split(",")[0]
        assert float(first) == xs[0]

    def test_json_output_carries_metadata(self, tmp_path, capsys):
        code = main(
            [
                "pdf", "--model", "am-gamma", "--alpha", "2.4", "--mu", "1.3",
                "--b", "1.5", "--omega", "0.8", "--grid", "0.1:3:50",
                "--format", "json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["model"]["family"] == "composite"
        assert payload["metadata"]["tool_version"]
        assert len(payload["abscissae"]) == 50
        assert payload["abscissae"] == sorted(payload["abscissae"])

    def test_extreme_gamma_atom_row(self, tmp_path):
        out = tmp_path / "c.csv"
        code = main(
            [
                "pdf", "--model", "extreme-gamma", "--alpha", "2", "--m", "1.1",
                "--b", "1.2", "--omega", "0.8", "--grid", "0.05:3:40",
                "--series-n", "160", "--out", str(out),
            ]
        )
        assert code == 0
        _, _, atoms, _ = parse_csv_curve(out.read_text())
        assert len(atoms) == 1
        assert atoms[0][0] == 0.0
        assert atoms[0][1] == pytest.approx(math.exp(-2.2), rel=1e-12)

    def test_gamma_shadow_value_at_origin(self, capsys):
        code = main(
            ["pdf", "--model", "gamma-shadow", "--b", "1", "--omega", "2",
             "--grid", "0:4:5"]
        )
        assert code == 0
        xs, vs, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert xs[0] == 0.0
        assert vs[0] == 0.5

    def test_oracle_flag_matches_series_route(self, capsys):
        args = [
            "pdf", "--model", "akm-gamma", "--alpha", "2", "--kappa", "1",
            "--mu", "1.5", "--b", "1.4", "--omega", "0.9", "--grid", "0.5:2:4",
            "--series-n", "160",
        ]
        assert main(args) == 0
        _, series_vals, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert main(args + ["--oracle"]) == 0
        _, oracle_vals, _, _ = parse_csv_curve(capsys.readouterr().out)
        for s, o in zip(series_vals, oracle_vals):
            assert s == pytest.approx(o, rel=1e-6)

    def test_missing_parameter_is_usage_error(self, capsys):
        code = main(["pdf", "--model", "akm", "--alpha", "2", "--mu", "1"])
        assert code == 2
        assert "kappa" in capsys.readouterr().err

    def test_bad_grid_is_usage_error(self, capsys):
        code = main(
            ["pdf", "--model", "am", "--alpha", "2", "--mu", "1", "--grid", "3:1:10"]
        )
        assert code == 2

    def test_invalid_parameter_value_is_usage_error(self, capsys):
        code = main(["pdf", "--model", "am", "--alpha", "-2", "--mu", "1"])
        assert code == 2

    def test_kmu_alias_forces_alpha_two(self, capsys):
        code = main(
            ["pdf", "--model", "kmu-gamma", "--kappa", "4", "--mu", "1",
             "--b", "1.8", "--omega", "0.7", "--grid", "0.5:1:2"]
        )
        assert code == 0
        capsys.readouterr()
        code = main(
            ["pdf", "--model", "kmu-gamma", "--alpha", "3", "--kappa", "4",
             "--mu", "1", "--b", "1.8", "--omega", "0.7"]
        )
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps(
                {"model": "am", "alpha": 2.0, "mu": 1.0, "grid": "0.5:1.5:3"}
            )
        )
        assert main(["pdf", "--config", str(config)]) == 0
        _, vs_config, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert main(["pdf", "--config", str(config), "--mu", "2.0"]) == 0
        _, vs_flag, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert vs_config != vs_flag  # the explicit flag won


class TestCdfCommand:
    def test_akm_cdf_curve(self, capsys):
        code = main(
            ["cdf", "--model", "akm", "--alpha", "2.5", "--kappa", "1.7",
             "--mu", "1.8", "--grid", "0:3:30"]
        )
        assert code == 0
        xs, vs, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert vs[0] == 0.0
        assert all(v2 >= v1 for v1, v2 in zip(vs, vs[1:]))
        assert vs[-1] <= 1.0

    def test_extreme_cdf_starts_at_atom(self, capsys):
        code = main(
            ["cdf", "--model", "extreme", "--alpha", "2", "--m", "1.1",
             "--grid", "0:3:10"]
        )
        assert code == 0
        _, vs, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert vs[0] == pytest.approx(math.exp(-2.2), rel=1e-10)

    def test_composite_cdf_by_quadrature(self, capsys):
        code = main(
            ["cdf", "--model", "am-gamma", "--alpha", "2", "--mu", "1",
             "--b", "2.5", "--omega", "0.6", "--grid", "0.2:6:12"]
        )
        assert code == 0
        _, vs, _, _ = parse_csv_curve(capsys.readouterr().out)
        assert all(v2 >= v1 for v1, v2 in zip(vs, vs[1:]))
        assert 0.97 <= vs[-1] <= 1.0


class TestMomentsCommand:
    def test_table_and_strict_pass(self, capsys):
        code = main(
            ["moments", "--model", "akm", "--alpha", "2", "--kappa", "1.5",
             "--mu", "2.1", "--strict"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "l,closed_form,quadrature,rel_diff"
        row0 = lines[1].split(",")
        assert float(row0[1]) == pytest.approx(1.0, abs=1e-12)
        assert float(row0[3]) <= 1e-12
        for line in lines[1:]:
            assert float(line.split(",")[3]) <= 1e-6

    def test_requires_plain_model(self, capsys):
        code = main(
            ["moments", "--model", "am", "--alpha", "2", "--mu", "1"]
        )
        assert code == 2


class TestFigureCommand:
    def test_figure_two_emits_four_curves(self, tmp_path, capsys):
        code = main(["figure", "2", "--out-dir", str(tmp_path), "--grid", "0.05:4:60"])
        assert code == 0
        files = sorted(tmp_path.glob("figure2_mu_*.json"))
        assert len(files) == 4
        for path in files:
            payload = json.loads(path.read_text())
            meta = payload["metadata"]
            assert meta["fixed_parameters"] == {
                "b": 1.8, "omega": 0.7, "kappa": 4.0, "alpha": 2.0
            }
            assert abs(meta["total_mass"] - 1.0) <= 1e-6
            assert all(v >= 0.0 for v in payload["values"])

    def test_figure_four_has_atoms(self, tmp_path):
        code = main(["figure", "4", "--out-dir", str(tmp_path), "--grid", "0.05:4:50"])
        assert code == 0
        files = sorted(tmp_path.glob("figure4_alpha_*.json"))
        assert len(files) == 5
        payload = json.loads(files[0].read_text())
        assert payload["atoms"] == [[0.0, math.exp(-2.2)]]
        assert abs(payload["metadata"]["total_mass"] - 1.0) <= 1e-6

    def test_invalid_figure_id(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["figure", "5"])
        assert exc_info.value.code == 2


class TestSampleCommand:
    def test_deterministic_sample_files(self, tmp_path):
        out1, out2 = tmp_path / "s1.txt", tmp_path / "s2.txt"
        args = ["sample", "--model", "extreme", "--alpha", "2", "--m", "1.1",
                "--count", "20000", "--seed", "7"]
        assert main(args + ["--out", str(out1), "--report", str(tmp_path / "r1.json")]) == 0
        assert main(args + ["--out", str(out2), "--report", str(tmp_path / "r2.json")]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_extreme_report_zero_fraction(self, tmp_path):
        report_path = tmp_path / "report.json"
        code = main(
            ["sample", "--model", "extreme", "--alpha", "2", "--m", "1.1",
             "--count", "100000", "--seed", "7", "--out", str(tmp_path / "s.txt"),
             "--report", str(report_path), "--strict"]
        )
        assert code == 0
        report = json.loads(report_path.read_text())
        expected = math.exp(-2.2)
        se = math.sqrt(expected * (1.0 - expected) / 100_000)
        assert abs(report["atom_frequency_observed"] - expected) <= 5.0 * se
        assert report["ks_statistic"] <= report["ks_critical_0_001"]

    def test_akm_gamma_strict_gof(self, tmp_path):
        code = main(
            ["sample", "--model", "akm-gamma", "--alpha", "2.2", "--kappa", "1.3",
             "--mu", "1.7", "--b", "1.6", "--omega", "0.8", "--count", "100000",
             "--seed", "13", "--series-n", "160",
             "--out", str(tmp_path / "s.txt"), "--report", str(tmp_path / "r.json"),
             "--strict"]
        )
        assert code == 0


class TestValidateCommand:
    def test_quick_level_passes(self, tmp_path):
        report_path = tmp_path / "validation.json"
        code = main(["validate", "--level", "quick", "--report", str(report_path)])
        assert code == 0
        report = json.loads(report_path.read_text())
        assert report["passed"] is True
        names = {c["name"] for c in report["checks"]}
        assert "series_vs_oracle" in names
        moments = next(c for c in report["checks"] if c["name"] == "moments")
        # The alternate printed normalization is exercised and recorded.
        assert "alt_form_matches_quadrature" in moments["details"]
        assert moments["details"]["alt_form_matches_quadrature"] is False

    def test_injected_kernel_sign_error_is_caught(self, monkeypatch):
        # Mutation smoke test: flip the inner-exponential sign in the
        # kernel and the oracle-agreement check must fail by name.
        import compfade.composite as composite
        from compfade.validation import check_series_vs_oracle

        original = composite.shadow_kernel_integral_ln

        def broken(p, a, alpha, omega, **kwargs):
            return original(p, a * 1.02, alpha, omega, **kwargs)

        monkeypatch.setattr(composite, "shadow_kernel_integral_ln", broken)
        result = check_series_vs_oracle(draws=1, points=4)
        assert result["name"] == "series_vs_oracle"
        assert result["passed"] is False
