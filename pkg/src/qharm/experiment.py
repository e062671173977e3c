"""Experiment harness: simulation runs, spectrum runs, Monte Carlo sweeps.

Binds the generator and the estimators into reproducible experiments and
writes CSV artifacts plus a textual summary. All randomness derives from a
master seed; Monte Carlo trial t uses seed (master XOR t), so runs are
deterministic and trials are independent.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .estimators import (
    CovarianceEstimate,
    HarmonicReport,
    Spectrum,
    build_covariance,
    classify_peaks,
    estimate_frequency_error,
    find_peaks,
    fourier_spectrum,
    music_spectrum,
    mvdr_spectrum,
)
from .signal_model import (
    ComplexSeries,
    QuaternionSeries,
    ThreePhaseConfig,
    ThreePhaseSeries,
    complex_signal,
    gen_three_phase,
    quaternion_signal,
    snr_to_sigma,
    write_complex_csv,
    write_quaternion_csv,
    write_three_phase_csv,
)

MODELS = ("complex", "quaternion")
ESTIMATORS = ("ft", "mvdr", "music")

_FMT = "{:.17g}"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to rerun an experiment, flat and serializable.

    Harmonic amplitudes here are relative to the fundamental (0.06 means six
    percent of ``v1``); the underlying generator receives absolute values.
    """

    fundamental_hz: float = 50.0
    sample_rate_hz: float = 20000.0
    phase_rad: float = math.pi / 7.0
    v1: float = 1.0
    harmonics: tuple[tuple[int, float], ...] = ((2, 0.06), (3, 0.06))
    snr_db: float | None = 40.0
    snr_sweep: tuple[float, float, float] | None = None
    trials: int = 300
    k: int = 80
    m: int = 32
    m0: int = 28
    grid: tuple[float, float, float] = (-500.0, 500.0, 0.5)
    models: tuple[str, ...] = ("complex", "quaternion")
    estimators: tuple[str, ...] = ("mvdr", "music")
    threshold_db: float = 35.0
    pairing_tol_hz: float | None = None
    miss_tolerance_hz: float = 10.0
    count: int | None = None
    seed: int = 12345
    output_dir: str | None = None

    def __post_init__(self):
        if self.v1 <= 0:
            raise ValueError("fundamental amplitude v1 must be positive")
        if self.k < 1:
            raise ValueError("snapshot count k must be >= 1")
        if not 1 <= self.m0 <= self.m:
            raise ValueError(f"noise dimension m0={self.m0} must satisfy 1 <= m0 <= m={self.m}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        start, stop, step = self.grid
        if step <= 0 or stop <= start:
            raise ValueError("grid must be start:stop:step with step > 0 and stop > start")
        if self.count is not None and self.count < self.samples_per_trial:
            raise ValueError(
                f"count={self.count} is too small; the estimation window needs "
                f"m + k - 1 = {self.samples_per_trial} samples"
            )
        for model in self.models:
            if model not in MODELS:
                raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
        for est in self.estimators:
            if est not in ESTIMATORS:
                raise ValueError(f"unknown estimator {est!r}; choose from {ESTIMATORS}")
        if not self.models or not self.estimators:
            raise ValueError("at least one model and one estimator are required")

    @property
    def samples_per_trial(self) -> int:
        return self.m + self.k - 1

    @property
    def harmonic_orders(self) -> tuple[int, ...]:
        """Orders present with nonzero amplitude (order 1 may be overridden)."""
        amplitudes = {1: self.v1}
        amplitudes.update({h: rel * self.v1 for h, rel in self.harmonics})
        return tuple(sorted(h for h, amp in amplitudes.items() if amp > 0))

    def grid_array(self) -> np.ndarray:
        start, stop, step = self.grid
        n = int(round((stop - start) / step))
        return start + step * np.arange(n + 1)

    def pairing_tolerance_hz(self) -> float:
        if self.pairing_tol_hz is not None:
            return self.pairing_tol_hz
        return 2.0 * self.grid[2]

    def sigma_for(self, snr_db: float | None) -> float:
        if snr_db is None:
            return 0.0
        return snr_to_sigma(snr_db, self.v1)

    def three_phase_config(self, sigma: float, seed: int) -> ThreePhaseConfig:
        # An explicit order-1 entry overrides the implicit (1, v1) fundamental,
        # which allows fundamental-free signals (e.g. a pure third harmonic)
        # while SNR stays referenced to the nominal v1.
        amplitudes = {1: self.v1}
        amplitudes.update({h: rel * self.v1 for h, rel in self.harmonics})
        harmonics = tuple(sorted(amplitudes.items()))
        return ThreePhaseConfig(
            fundamental_hz=self.fundamental_hz,
            sample_rate_hz=self.sample_rate_hz,
            phase_rad=self.phase_rad,
            harmonics=harmonics,
            noise_sigma=sigma,
            seed=seed,
        )

    def snr_points(self) -> list[float]:
        if self.snr_sweep is not None:
            start, stop, step = self.snr_sweep
            if step <= 0:
                raise ValueError("snr sweep step must be positive")
            points = []
            value = start
            while value <= stop + 1e-9:
                points.append(round(value, 9))
                value += step
            return points
        if self.snr_db is None:
            raise ValueError("a Monte Carlo run needs --snr (a value or start:stop:step)")
        return [self.snr_db]

    def truth_hz(self, order: int) -> list[float]:
        f = order * self.fundamental_hz
        if order % 3 == 1:
            return [f]
        if order % 3 == 2:
            return [-f]
        return [f, -f]


def trial_series(
    config: ExperimentConfig, sigma: float, seed: int, count: int | None = None
) -> tuple[ThreePhaseSeries, ComplexSeries, QuaternionSeries]:
    """Generate one trial's three-phase series and both embeddings."""
    n = count if count is not None else (config.count or config.samples_per_trial)
    three = gen_three_phase(config.three_phase_config(sigma, seed), 0, n)
    return three, complex_signal(three), quaternion_signal(three)


def spectra_for_trial(
    config: ExperimentConfig, sigma: float, seed: int
) -> dict[tuple[str, str], Spectrum]:
    """All requested (model, estimator) spectra for one generated trial."""
    _, cplx, quat = trial_series(config, sigma, seed)
    grid = config.grid_array()
    out: dict[tuple[str, str], Spectrum] = {}
    for model in config.models:
        series = quat if model == "quaternion" else cplx
        cov: CovarianceEstimate | None = None
        if any(est in ("mvdr", "music") for est in config.estimators):
            cov = build_covariance(series, config.m, config.k)
        for est in config.estimators:
            if est == "ft":
                out[(model, est)] = fourier_spectrum(series, grid)
            elif est == "mvdr":
                out[(model, est)] = mvdr_spectrum(cov, grid)
            else:
                out[(model, est)] = music_spectrum(cov, config.m0, grid)
    return out


def report_for_spectrum(config: ExperimentConfig, spectrum: Spectrum) -> HarmonicReport:
    peaks = find_peaks(spectrum, config.threshold_db)
    return classify_peaks(peaks, config.pairing_tolerance_hz())


@dataclass(eq=False)
class SpectrumRunResult:
    spectra: dict[tuple[str, str], Spectrum]
    reports: dict[tuple[str, str], HarmonicReport]
    written: list[Path] = field(default_factory=list)
    summary: str = ""


@dataclass(frozen=True)
class MonteCarloRow:
    snr_db: float
    model: str
    estimator: str
    harmonic: int
    mean_abs_error_hz: float
    miss_rate: float


@dataclass(eq=False)
class MonteCarloResult:
    rows: list[MonteCarloRow]
    written: list[Path] = field(default_factory=list)
    summary: str = ""


def _config_lines(config: ExperimentConfig) -> list[str]:
    lines = []
    for name in (
        "fundamental_hz sample_rate_hz phase_rad v1 harmonics snr_db snr_sweep "
        "trials k m m0 grid models estimators threshold_db pairing_tol_hz "
        "miss_tolerance_hz count seed"
    ).split():
        lines.append(f"  {name} = {getattr(config, name)!r}")
    lines.append(f"  samples_per_trial = {config.samples_per_trial} (m + k - 1)")
    return lines


def _ensure_dir(config: ExperimentConfig) -> Path | None:
    if config.output_dir is None:
        return None
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_spectrum_csv(spectrum: Spectrum, path) -> None:
    db = 10.0 * np.log10(np.maximum(spectrum.values, 1e-300))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["freq_hz", "value_db"])
        for f, v in zip(spectrum.grid_hz, db):
            writer.writerow([_FMT.format(f), _FMT.format(v)])


def write_report_csv(report: HarmonicReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["freq_hz", "class", "peak_db", "mirror_hz"])
        for det in report.detections:
            peak_db = 10.0 * math.log10(max(det.peak_value, 1e-300))
            mirror = "" if det.mirror_frequency_hz is None else _FMT.format(det.mirror_frequency_hz)
            writer.writerow(
                [
                    _FMT.format(det.frequency_hz),
                    det.sequence_class.value,
                    _FMT.format(peak_db),
                    mirror,
                ]
            )


def run_spectrum(config: ExperimentConfig) -> SpectrumRunResult:
    """Single-realization spectra and classified detections per (model, estimator)."""
    sigma = config.sigma_for(config.snr_db)
    spectra = spectra_for_trial(config, sigma, config.seed)
    reports = {key: report_for_spectrum(config, spec) for key, spec in spectra.items()}

    lines = ["spectrum run", *_config_lines(config)]
    for (model, est), report in sorted(reports.items()):
        spec = spectra[(model, est)]
        lines.append(
            f"model={model} estimator={est.upper()} "
            f"max_realness_residue={spec.max_realness_residue:.3e}"
        )
        if not report.detections:
            lines.append("  no detections")
        for det in report.detections:
            mirror = (
                ""
                if det.mirror_frequency_hz is None
                else f" mirror {det.mirror_frequency_hz:+.3f} Hz"
            )
            lines.append(
                f"  {det.frequency_hz:+9.3f} Hz  {det.sequence_class.value}"
                f"  peak {10.0 * math.log10(max(det.peak_value, 1e-300)):.2f} dB{mirror}"
            )
    summary = "\n".join(lines) + "\n"

    written: list[Path] = []
    out = _ensure_dir(config)
    if out is not None:
        for (model, est), spec in sorted(spectra.items()):
            path = out / f"spectrum_{model}_{est}.csv"
            write_spectrum_csv(spec, path)
            written.append(path)
            path = out / f"report_{model}_{est}.csv"
            write_report_csv(reports[(model, est)], path)
            written.append(path)
        path = out / "summary.txt"
        path.write_text(summary)
        written.append(path)
    return SpectrumRunResult(spectra, reports, written, summary)


def montecarlo_trial_errors(
    config: ExperimentConfig, snr_db: float, trial: int
) -> dict[tuple[str, str, int], float | None]:
    """Per-harmonic absolute errors (None marks a miss) for one trial."""
    sigma = config.sigma_for(snr_db)
    seed = config.seed ^ trial
    spectra = spectra_for_trial(config, sigma, seed)
    out: dict[tuple[str, str, int], float | None] = {}
    for (model, est), spec in spectra.items():
        report = report_for_spectrum(config, spec)
        for order in config.harmonic_orders:
            errs = estimate_frequency_error(
                report, config.truth_hz(order), config.miss_tolerance_hz
            )
            if any(e is None for e in errs):
                out[(model, est, order)] = None
            else:
                out[(model, est, order)] = float(np.mean(errs))
    return out


def run_montecarlo(config: ExperimentConfig) -> MonteCarloResult:
    """Error-vs-SNR table averaged over seeded independent trials."""
    snrs = config.snr_points()
    rows: list[MonteCarloRow] = []
    for snr_db in snrs:
        acc: dict[tuple[str, str, int], list[float]] = {}
        misses: dict[tuple[str, str, int], int] = {}
        for trial in range(config.trials):
            errors = montecarlo_trial_errors(config, snr_db, trial)
            for key, err in errors.items():
                if err is None:
                    misses[key] = misses.get(key, 0) + 1
                else:
                    acc.setdefault(key, []).append(err)
        for model in config.models:
            for est in config.estimators:
                for order in config.harmonic_orders:
                    key = (model, est, order)
                    hits = acc.get(key, [])
                    mean = float(np.mean(hits)) if hits else math.nan
                    rows.append(
                        MonteCarloRow(
                            snr_db=snr_db,
                            model=model,
                            estimator=est,
                            harmonic=order,
                            mean_abs_error_hz=mean,
                            miss_rate=misses.get(key, 0) / config.trials,
                        )
                    )

    lines = ["montecarlo run", *_config_lines(config)]
    for row in rows:
        lines.append(
            f"  snr={row.snr_db:g} dB model={row.model} estimator={row.estimator.upper()} "
            f"harmonic={row.harmonic}: mean_abs_error={row.mean_abs_error_hz:.6g} Hz "
            f"miss_rate={row.miss_rate:.3f}"
        )
    summary = "\n".join(lines) + "\n"

    written: list[Path] = []
    out = _ensure_dir(config)
    if out is not None:
        path = out / "montecarlo.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["snr_db", "model", "estimator", "harmonic", "mean_abs_error_hz", "miss_rate"]
            )
            for row in rows:
                writer.writerow(
                    [
                        _FMT.format(row.snr_db),
                        row.model,
                        row.estimator,
                        row.harmonic,
                        _FMT.format(row.mean_abs_error_hz),
                        _FMT.format(row.miss_rate),
                    ]
                )
        written.append(path)
        path = out / "summary.txt"
        path.write_text(summary)
        written.append(path)
    return MonteCarloResult(rows, written, summary)


def run_simulate(config: ExperimentConfig, count: int | None = None) -> list[Path]:
    """Write raw three-phase, complex, and quaternion series CSVs."""
    out = _ensure_dir(config)
    if out is None:
        raise ValueError("simulate requires an output directory")
    n = count if count is not None else (config.count or config.samples_per_trial)
    sigma = config.sigma_for(config.snr_db)
    three, cplx, quat = trial_series(config, sigma, config.seed, count=n)
    written = []
    path = out / "three_phase.csv"
    write_three_phase_csv(three, path)
    written.append(path)
    path = out / "complex.csv"
    write_complex_csv(cplx, path)
    written.append(path)
    path = out / "quaternion.csv"
    write_quaternion_csv(quat, path)
    written.append(path)
    return written
