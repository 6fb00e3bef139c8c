import os

import numpy as np
import pytest

import quthermo.acceptance
from quthermo import UsageError
from quthermo.cli import main
from quthermo.sweep import (
    FIGURE_PRESETS,
    ExperimentConfig,
    ModelSpec,
    config_from_dict,
    decode_path,
    encode_path,
    evaluate_point,
    load_config,
    parse_csv,
    read_csv,
    render_csv,
    run_sweep,
    write_csv,
)

ISING_TOML = """
[model]
kind = "two_qubit"
b1 = 3.0
b2 = 1.0
jz = 2.0

[grid]
t_min = 0.5
t_max = 10.0
count = 3
spacing = "log"

[scheme]
paths = ["12"]
mode = "sld_eigenbasis"

[output]
path = "ising.csv"
"""


def ising_config():
    return ExperimentConfig(
        model=ModelSpec.of("two_qubit", b1=3.0, b2=1.0, jz=2.0),
        t_min=0.5,
        t_max=10.0,
        count=3,
    )


class TestConfig:
    def test_toml_parsing(self, tmp_path):
        path = tmp_path / "exp.toml"
        path.write_text(ISING_TOML)
        config = load_config(str(path))
        assert config.model.kind == "two_qubit"
        assert config.model.as_dict()["b1"] == 3.0
        assert config.count == 3
        assert config.paths == ((0, 1),)
        assert config.output == "ising.csv"

    def test_rejects_single_point_grid(self):
        with pytest.raises(UsageError):
            ExperimentConfig(model=ModelSpec.of("two_qubit", jz=1.0), t_min=1, t_max=2, count=1)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(UsageError):
            ExperimentConfig(model=ModelSpec.of("two_qubit", jz=1.0), t_min=0, t_max=2, count=5)

    def test_rejects_unknown_mode(self):
        with pytest.raises(UsageError):
            ExperimentConfig(
                model=ModelSpec.of("two_qubit", jz=1.0), t_min=1, t_max=2, count=2, mode="x"
            )

    def test_rejects_bad_path(self):
        with pytest.raises(UsageError):
            ExperimentConfig(
                model=ModelSpec.of("two_qubit", jz=1.0),
                t_min=1, t_max=2, count=2, paths=((0, 0),),
            )

    def test_rejects_malformed_document(self):
        with pytest.raises(UsageError):
            config_from_dict({"grid": {}})

    def test_unknown_model_kind(self):
        with pytest.raises(UsageError):
            ModelSpec.of("bogus", j=1.0)

    def test_path_encoding_round_trip(self):
        assert encode_path((0, 2, 1)) == "132"
        assert decode_path("132") == (0, 2, 1)
        long = tuple(range(11))
        assert decode_path(encode_path(long)) == long

    def test_temperature_grids(self):
        cfg = ising_config()
        assert np.allclose(cfg.temperatures(), np.geomspace(0.5, 10.0, 3))
        lin = ExperimentConfig(
            model=cfg.model, t_min=1.0, t_max=2.0, count=5, spacing="linear"
        )
        assert np.allclose(lin.temperatures(), np.linspace(1.0, 2.0, 5))


class TestSweep:
    def test_ising_columns_vanish(self):
        records = run_sweep(ising_config())
        assert len(records) == 3
        for rec in records:
            assert rec.status == "ok"
            assert abs(rec.delta_f) <= 1e-10
            assert abs(rec.discord_rate) <= 1e-10
            assert abs(rec.discord) <= 1e-10
            assert abs(rec.diag_discord) <= 1e-10
            assert rec.rel_metric is None

    def test_zero_hamiltonian_grid(self):
        config = ExperimentConfig(
            model=ModelSpec.of("two_qubit"), t_min=1.0, t_max=2.0, count=2
        )
        for rec in run_sweep(config):
            assert rec.status == "ok"
            assert abs(rec.f_global) <= 1e-12
            assert abs(rec.f_locc) <= 1e-12
            assert abs(rec.mutual_info) <= 1e-10

    def test_low_temperature_points_flagged_not_failed(self):
        # below the regime threshold the record is flagged, never failed
        records = run_sweep(ising_config())
        assert all(rec.status == "ok" for rec in records)
        assert all(not rec.high_t_regime for rec in records)
        hot = ExperimentConfig(
            model=ModelSpec.of("two_qubit", b1=3.0, b2=1.0, jz=2.0),
            t_min=50.0, t_max=100.0, count=2,
        )
        assert all(rec.high_t_regime for rec in run_sweep(hot))

    def test_rejects_non_finite_model_parameter(self):
        with pytest.raises(UsageError):
            ExperimentConfig(
                model=ModelSpec.of("two_qubit", jx=float("nan")),
                t_min=1.0, t_max=2.0, count=2,
            )

    def test_worker_count_does_not_change_output(self):
        config = ising_config()
        seq = render_csv(run_sweep(config, workers=1), 2, reproducible=True)
        par = render_csv(run_sweep(config, workers=2), 2, reproducible=True)
        assert seq == par

    def test_reproducible_rendering_is_byte_identical(self):
        config = ising_config()
        a = render_csv(run_sweep(config), 2, reproducible=True)
        b = render_csv(run_sweep(config), 2, reproducible=True)
        assert a == b
        assert not a.startswith("#")
        stamped = render_csv(run_sweep(config), 2, reproducible=False)
        assert stamped.startswith("# generated:")

    def test_csv_round_trip(self, tmp_path):
        records = run_sweep(ising_config())
        out = tmp_path / "out.csv"
        write_csv(str(out), records, 2, reproducible=True)
        rows = read_csv(str(out))
        assert len(rows) == len(records)
        for rec, row in zip(records, rows):
            assert row["model"] == rec.model
            assert row["t"] == rec.t  # 17 significant digits: exact round trip
            assert row["f_global"] == rec.f_global
            assert row["delta_f"] == rec.delta_f
            assert row["discord_rate"] == rec.discord_rate
            assert row["rel_metric"] is None
            assert row["path"] == rec.path
            assert row["status"] == "ok"

    def test_lf_line_endings(self, tmp_path):
        out = tmp_path / "out.csv"
        write_csv(str(out), run_sweep(ising_config()), 2, reproducible=True)
        data = out.read_bytes()
        assert b"\r" not in data
        assert data.decode("utf-8").endswith("\n")

    def test_failed_point_is_recorded_not_fatal(self):
        # a pathological spec: chain with n below the minimum fails at build time
        job = (ModelSpec.of("chain", n=1, b=1.0, j=1.0), 1.0, (0,), "sld_eigenbasis", 1e-4)
        rec = evaluate_point(job)
        assert rec.status.startswith("failed:")
        assert rec.f_global is None

    def test_figure_presets_registered(self):
        assert sorted(FIGURE_PRESETS) == ["fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b"]
        jobs = FIGURE_PRESETS["fig2a"]()
        assert len(jobs) == 200
        spec, t, path, mode, rel = jobs[0]
        assert spec.as_dict() == {"b1": 3.0, "b2": 1.0, "jx": 1.0, "jy": 1.0, "jz": 2.0}
        chain_jobs = FIGURE_PRESETS["fig3a"]()
        assert len(chain_jobs) == 3 * 120
        grid_jobs = FIGURE_PRESETS["fig4b"]()
        assert len(grid_jobs) == 21 * 21
        assert all(j[1] == 2.0 for j in grid_jobs)


class TestCli:
    def test_compute_happy_path(self, tmp_path, capsys):
        config = tmp_path / "exp.toml"
        config.write_text(ISING_TOML)
        out = tmp_path / "result.csv"
        code = main(["compute", "--config", str(config), "--out", str(out), "--reproducible"])
        assert code == 0
        assert out.exists()
        rows = read_csv(str(out))
        assert len(rows) == 3

    def test_compute_missing_config_is_usage_error(self, tmp_path):
        assert main(["compute", "--config", str(tmp_path / "nope.toml")]) == 2

    def test_compute_aborting_failure_is_exit_three(self, tmp_path):
        # a chain below the minimum size fails at every grid point
        config = tmp_path / "bad.toml"
        config.write_text(
            '[model]\nkind = "chain"\nn = 1\nb = 1.0\n\n'
            "[grid]\nt_min = 1.0\nt_max = 2.0\ncount = 2\n"
        )
        out = tmp_path / "bad.csv"
        assert main(["compute", "--config", str(config), "--out", str(out)]) == 3
        rows = read_csv(str(out))
        assert all(row["status"].startswith("failed:") for row in rows)

    def test_unknown_figure_is_usage_error(self, tmp_path):
        assert main(["figure", "nope", "--out-dir", str(tmp_path)]) == 2

    def test_verify_exit_codes(self, monkeypatch, tmp_path, capsys):
        calls = []

        def fake_pass():
            calls.append("ok")
            return True, "fine"

        def fake_fail():
            return False, "broken"

        monkeypatch.setattr(
            quthermo.acceptance, "CHECKS", ((1, "a", fake_pass), (2, "b", fake_pass))
        )
        assert main(["verify", "--report", str(tmp_path / "rep.csv")]) == 0
        report = (tmp_path / "rep.csv").read_text()
        assert "a,true" in report and "b,true" in report

        monkeypatch.setattr(
            quthermo.acceptance, "CHECKS", ((1, "a", fake_pass), (2, "b", fake_fail))
        )
        assert main(["verify"]) == 1
        printed = capsys.readouterr().out
        assert "[FAIL]" in printed
