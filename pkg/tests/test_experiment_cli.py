"""Experiment harness and command-line interface tests.

Estimation-quality runs use a 1 kHz sample rate so the 32-tap window spans
enough of a fundamental cycle to resolve the harmonic set; the stock
20 kHz configuration is exercised for plumbing only (see test_acceptance for
the resolution analysis).
"""

import math

import numpy as np
import pytest

from qharm.cli import main
from qharm.estimators import SequenceClass
from qharm.experiment import (
    ExperimentConfig,
    run_montecarlo,
    run_simulate,
    run_spectrum,
)
from qharm.signal_model import read_complex_csv, read_quaternion_csv, read_three_phase_csv

RESOLVED = dict(sample_rate_hz=1000.0)


class TestConfigValidation:
    def test_defaults_are_flagship_setup(self):
        cfg = ExperimentConfig()
        assert cfg.fundamental_hz == 50.0
        assert cfg.sample_rate_hz == 20000.0
        assert cfg.phase_rad == pytest.approx(math.pi / 7)
        assert cfg.k == 80 and cfg.m == 32 and cfg.m0 == 28
        assert cfg.harmonics == ((2, 0.06), (3, 0.06))
        assert cfg.snr_db == 40.0
        assert cfg.trials == 300
        assert cfg.samples_per_trial == 111

    def test_invalid_noise_dimension(self):
        with pytest.raises(ValueError):
            ExperimentConfig(m0=33)

    def test_invalid_trials(self):
        with pytest.raises(ValueError):
            ExperimentConfig(trials=0)

    def test_invalid_grid(self):
        with pytest.raises(ValueError):
            ExperimentConfig(grid=(10.0, -10.0, 0.5))

    def test_count_too_small(self):
        with pytest.raises(ValueError):
            ExperimentConfig(count=50)

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            ExperimentConfig(models=("octonion",))

    def test_grid_array_endpoints(self):
        grid = ExperimentConfig().grid_array()
        assert grid[0] == -500.0 and grid[-1] == 500.0
        assert len(grid) == 2001

    def test_snr_points_sweep(self):
        cfg = ExperimentConfig(snr_sweep=(25.0, 45.0, 5.0), snr_db=None)
        assert cfg.snr_points() == [25.0, 30.0, 35.0, 40.0, 45.0]

    def test_pairing_tolerance_default_two_steps(self):
        assert ExperimentConfig().pairing_tolerance_hz() == 1.0
        assert ExperimentConfig(pairing_tol_hz=0.3).pairing_tolerance_hz() == 0.3

    def test_truth_mapping(self):
        cfg = ExperimentConfig()
        assert cfg.truth_hz(1) == [50.0]
        assert cfg.truth_hz(2) == [-100.0]
        assert cfg.truth_hz(3) == [150.0, -150.0]

    def test_order_one_override(self):
        cfg = ExperimentConfig(harmonics=((1, 0.0), (3, 1.0)))
        tp = cfg.three_phase_config(0.0, 0)
        assert dict(tp.harmonics) == {1: 0.0, 3: 1.0}
        assert cfg.harmonic_orders == (3,)


class TestRunSimulate:
    def test_writes_three_series(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path), count=150, **RESOLVED)
        written = run_simulate(cfg)
        assert sorted(p.name for p in written) == [
            "complex.csv",
            "quaternion.csv",
            "three_phase.csv",
        ]
        three = read_three_phase_csv(tmp_path / "three_phase.csv", 1000.0)
        assert len(three) == 150

    def test_round_trip_lossless(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path), **RESOLVED)
        run_simulate(cfg)
        from qharm.experiment import trial_series

        three, cplx, quat = trial_series(cfg, cfg.sigma_for(cfg.snr_db), cfg.seed)
        back = read_three_phase_csv(tmp_path / "three_phase.csv", 1000.0)
        np.testing.assert_array_equal(back.samples, three.samples)
        np.testing.assert_array_equal(
            read_complex_csv(tmp_path / "complex.csv", 1000.0).samples, cplx.samples
        )
        np.testing.assert_array_equal(
            read_quaternion_csv(tmp_path / "quaternion.csv", 1000.0).samples, quat.samples
        )

    def test_count_zero_writes_headers(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path), **RESOLVED)
        run_simulate(cfg, count=0)
        assert (tmp_path / "three_phase.csv").read_text().splitlines() == ["n,va,vb,vc"]
        assert (tmp_path / "quaternion.csv").read_text().splitlines() == ["n,w,x,y,z"]

    def test_pure_third_harmonic_complex_column_is_zero(self, tmp_path):
        cfg = ExperimentConfig(
            output_dir=str(tmp_path),
            harmonics=((1, 0.0), (3, 1.0)),
            snr_db=math.inf,
            **RESOLVED,
        )
        run_simulate(cfg)
        back = read_complex_csv(tmp_path / "complex.csv", 1000.0)
        assert np.abs(back.samples).max() <= 1e-12


class TestRunSpectrum:
    def test_flagship_detections_at_resolved_rate(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path), **RESOLVED)
        result = run_spectrum(cfg)

        def classes(model, est):
            out = {}
            for det in result.reports[(model, est)].detections:
                out.setdefault(det.sequence_class, []).append(round(det.frequency_hz))
            return {k: sorted(v) for k, v in out.items()}

        for est in ("mvdr", "music"):
            got = classes("quaternion", est)
            assert got[SequenceClass.POSITIVE_OR_NEGATIVE] == [-100, 50]
            assert got[SequenceClass.ZERO] == [150]
            got_c = classes("complex", est)
            assert got_c[SequenceClass.POSITIVE_OR_NEGATIVE] == [-100, 50]
            assert SequenceClass.ZERO not in got_c

    def test_noiseless_single_tone_quaternion_mvdr(self, tmp_path):
        cfg = ExperimentConfig(
            output_dir=str(tmp_path),
            harmonics=(),
            snr_db=math.inf,
            models=("quaternion",),
            estimators=("mvdr",),
            **RESOLVED,
        )
        result = run_spectrum(cfg)
        (report,) = result.reports.values()
        assert len(report.detections) == 1
        det = report.detections[0]
        assert det.frequency_hz == pytest.approx(50.0, abs=0.25)

    def test_writes_expected_files(self, tmp_path):
        cfg = ExperimentConfig(output_dir=str(tmp_path), **RESOLVED)
        result = run_spectrum(cfg)
        names = sorted(p.name for p in result.written)
        assert "spectrum_quaternion_mvdr.csv" in names
        assert "report_complex_music.csv" in names
        assert "summary.txt" in names
        header = (tmp_path / "spectrum_quaternion_mvdr.csv").read_text().splitlines()[0]
        assert header == "freq_hz,value_db"
        header = (tmp_path / "report_quaternion_mvdr.csv").read_text().splitlines()[0]
        assert header == "freq_hz,class,peak_db,mirror_hz"

    def test_byte_identical_reruns(self, tmp_path):
        files = {}
        for attempt in ("a", "b"):
            out = tmp_path / attempt
            cfg = ExperimentConfig(output_dir=str(out), **RESOLVED)
            result = run_spectrum(cfg)
            files[attempt] = {p.name: p.read_bytes() for p in result.written}
        assert files["a"] == files["b"]

    def test_different_seed_changes_output(self, tmp_path):
        blobs = []
        for seed in (1, 2):
            out = tmp_path / str(seed)
            cfg = ExperimentConfig(output_dir=str(out), seed=seed, **RESOLVED)
            run_spectrum(cfg)
            blobs.append((out / "spectrum_quaternion_mvdr.csv").read_bytes())
        assert blobs[0] != blobs[1]

    def test_fourier_estimator_runs(self, tmp_path):
        cfg = ExperimentConfig(
            output_dir=str(tmp_path), estimators=("ft",), **RESOLVED
        )
        result = run_spectrum(cfg)
        assert ("quaternion", "ft") in result.spectra


class TestRunMontecarlo:
    def test_row_structure(self):
        cfg = ExperimentConfig(
            trials=2, snr_sweep=(35.0, 45.0, 5.0), snr_db=None, **RESOLVED
        )
        result = run_montecarlo(cfg)
        # 3 SNRs x 2 models x 2 estimators x 3 harmonics
        assert len(result.rows) == 3 * 2 * 2 * 3
        snrs = sorted({row.snr_db for row in result.rows})
        assert snrs == [35.0, 40.0, 45.0]

    def test_noiseless_single_trial_errors_below_half_step(self):
        cfg = ExperimentConfig(trials=1, snr_db=math.inf, **RESOLVED)
        result = run_montecarlo(cfg)
        for row in result.rows:
            if row.model == "complex" and row.harmonic == 3:
                continue  # invisible to the Clarke embedding
            assert row.miss_rate == 0.0, row
            assert row.mean_abs_error_hz <= 0.25, row

    def test_noiseless_complex_misses_zero_sequence_at_default_threshold(self):
        cfg = ExperimentConfig(trials=1, snr_db=math.inf, **RESOLVED)
        result = run_montecarlo(cfg)
        for row in result.rows:
            if row.model == "complex" and row.harmonic == 3:
                assert row.miss_rate == 1.0

    def test_csv_written(self, tmp_path):
        cfg = ExperimentConfig(
            output_dir=str(tmp_path), trials=1, snr_db=40.0, **RESOLVED
        )
        result = run_montecarlo(cfg)
        assert (tmp_path / "montecarlo.csv").exists()
        lines = (tmp_path / "montecarlo.csv").read_text().splitlines()
        assert lines[0] == "snr_db,model,estimator,harmonic,mean_abs_error_hz,miss_rate"
        assert len(lines) == 1 + len(result.rows)


class TestCli:
    def test_spectrum_exit_zero(self, tmp_path, capsys):
        rc = main(
            [
                "spectrum",
                "--out", str(tmp_path),
                "--sample-rate-hz", "1000",
                "--seed", "3",
            ]
        )
        assert rc == 0
        assert (tmp_path / "summary.txt").exists()
        out = capsys.readouterr().out
        assert "zero_sequence" in out

    def test_simulate_exit_zero(self, tmp_path):
        rc = main(
            ["simulate", "--out", str(tmp_path), "--count", "120", "--sample-rate-hz", "1000"]
        )
        assert rc == 0
        assert (tmp_path / "quaternion.csv").exists()

    def test_montecarlo_exit_zero(self, tmp_path):
        rc = main(
            [
                "montecarlo",
                "--out", str(tmp_path),
                "--sample-rate-hz", "1000",
                "--snr", "40",
                "--trials", "1",
            ]
        )
        assert rc == 0
        assert (tmp_path / "montecarlo.csv").exists()

    def test_invalid_value_reports_error(self, tmp_path, capsys):
        rc = main(["spectrum", "--out", str(tmp_path), "--m0", "99"])
        assert rc == 1
        assert "m0" in capsys.readouterr().err

    def test_missing_out_fails(self, capsys):
        rc = main(["simulate"])
        assert rc == 1
        assert "--out" in capsys.readouterr().err

    def test_config_file_and_flag_override(self, tmp_path, capsys):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text(
            "# flagship setup, resolvable rate\n"
            "sample_rate_hz = 1000\n"
            "seed = 11\n"
            "trials = 1\n"
            "snr = 40\n"
        )
        out = tmp_path / "out"
        rc = main(
            [
                "montecarlo",
                "--config", str(cfg_file),
                "--out", str(out),
                "--snr", "35",  # overrides the file
            ]
        )
        assert rc == 0
        text = (out / "montecarlo.csv").read_text()
        assert text.splitlines()[1].startswith("35,")

    def test_snr_sweep_flag(self, tmp_path):
        rc = main(
            [
                "montecarlo",
                "--out", str(tmp_path),
                "--sample-rate-hz", "1000",
                "--snr", "35:45:5",
                "--trials", "1",
            ]
        )
        assert rc == 0
        lines = (tmp_path / "montecarlo.csv").read_text().splitlines()
        assert {line.split(",")[0] for line in lines[1:]} == {"35", "40", "45"}

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg_file = tmp_path / "bad.cfg"
        cfg_file.write_text("voltage = 7\n")
        rc = main(["spectrum", "--config", str(cfg_file), "--out", str(tmp_path)])
        assert rc == 1
        assert "voltage" in capsys.readouterr().err

    def test_harmonics_flag(self, tmp_path):
        rc = main(
            [
                "simulate",
                "--out", str(tmp_path),
                "--sample-rate-hz", "1000",
                "--harmonics", "1:0,3:1.0",
                "--snr", "inf",
                "--count", "111",
            ]
        )
        assert rc == 0
        back = read_complex_csv(tmp_path / "complex.csv", 1000.0)
        assert np.abs(back.samples).max() <= 1e-12
