"""Spectral estimators over the complex and quaternion signal embeddings.

Covariance matrices are estimated from a delayed-snapshot window matrix
(entry (m, k) holds the sample at end_index - k - m) as R = V V^H / K. Three
spectra are provided for both embeddings:

- MVDR:    1 / Re(s^H R^-1 s), with diagonal loading applied before the
           inversion only;
- MUSIC:   1 / ||s^H U_N||^2, with U_N the eigenvectors of the smallest
           covariance eigenvalues (no loading, the eigenstructure matters);
- Fourier: ||sum_n v(n) exp(-mu*w*Ts*n)|| / N with the kernel multiplied on
           the right (the complex branch uses exp(-i*w*Ts*n)).

The quaternion sweep vector runs along the axis mu = (i+j+k)/sqrt(3). With
that axis, a harmonic of order h shows up at +h*f1 when h = 1 mod 3, at
-h*f1 when h = 2 mod 3, and at both +/-h*f1 when h is a multiple of 3; the
mirrored pair is the signature that classify_peaks uses to label
zero-sequence harmonics. Note that the right-multiplied Fourier kernel
mirrors the single-sided peaks relative to MVDR/MUSIC (a consequence of the
non-commutative coefficients); the quadratic-form estimators are unaffected.

Quadratic forms of Hermitian matrices are real-valued in exact arithmetic;
each spectrum evaluation asserts that the leftover vector part (imaginary
part in the complex branch) is negligible relative to the attainable scale
of the form, and records the worst residue on the returned Spectrum.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels
from .linalg import (
    IllConditionedError,
    QMatrix,
    _project_adjoint,
    adjoint_complex,
    hermitian_transpose,
    noise_subspace,
    qeig_hermitian,
    qmatmul,
)
from .quaternion import DEFAULT_AXIS, FrequencyAxis, qexp_axis
from .signal_model import ComplexSeries, QuaternionSeries

logger = logging.getLogger(__name__)

# Relative bound on the non-real residue of a Hermitian quadratic form.
REALNESS_RTOL = 1e-8
# Pseudo-spectrum denominators are floored here to keep values finite.
DENOM_FLOOR = 1e-300
# Default diagonal loading: this multiple of the average diagonal power.
DEFAULT_LOADING_SCALE = 1e-10

COND_LIMIT = 1e12


class RealnessError(RuntimeError):
    """A provably-real quadratic form came back with a large vector part."""


class SequenceClass(Enum):
    POSITIVE_OR_NEGATIVE = "positive_or_negative_sequence"
    ZERO = "zero_sequence"


@dataclass(eq=False)
class CovarianceEstimate:
    """Sample covariance of a delayed-snapshot window.

    ``matrix`` is a QMatrix for the quaternion branch or a complex ndarray
    for the complex branch. ``loading`` is the diagonal loading amount that
    MVDR will add before inverting.
    """

    matrix: "QMatrix | np.ndarray"
    model: str
    window: int
    snapshots: int
    sample_rate_hz: float
    loading: float = 0.0

    def __post_init__(self):
        if self.model not in ("complex", "quaternion"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.loading < 0:
            raise ValueError("loading must be non-negative")
        if self.model == "quaternion":
            if not isinstance(self.matrix, QMatrix):
                raise TypeError("quaternion covariance requires a QMatrix")
            if not self.matrix.is_hermitian(1e-12):
                raise ValueError("covariance must be Hermitian")
            diag = self.matrix.data[np.arange(self.window), np.arange(self.window)]
            if np.any(diag[:, 0] < -1e-12) or np.abs(diag[:, 1:]).max(initial=0.0) > 1e-12:
                raise ValueError("covariance diagonal must be real and non-negative")
        else:
            m = np.asarray(self.matrix)
            scale = max(1.0, float(np.abs(m).max()))
            if np.abs(m - m.conj().T).max() > 1e-12 * scale:
                raise ValueError("covariance must be Hermitian")


@dataclass(eq=False)
class Spectrum:
    """Pseudo-spectrum values over a signed frequency grid.

    ``max_realness_residue`` is the worst relative vector-part residue seen
    while evaluating the underlying quadratic forms (0 for the Fourier
    spectrum, whose magnitude is taken directly).
    """

    grid_hz: np.ndarray
    values: np.ndarray
    estimator: str
    model: str
    max_realness_residue: float = 0.0

    def __post_init__(self):
        self.grid_hz = np.asarray(self.grid_hz, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.grid_hz.ndim != 1 or self.grid_hz.shape != self.values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if self.grid_hz.size >= 2 and np.any(np.diff(self.grid_hz) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("spectrum values must be finite and non-negative")


@dataclass(frozen=True)
class Detection:
    frequency_hz: float
    sequence_class: SequenceClass
    peak_value: float
    mirror_frequency_hz: float | None = None


@dataclass(eq=False)
class HarmonicReport:
    detections: list[Detection] = field(default_factory=list)


def build_covariance(
    series: "ComplexSeries | QuaternionSeries",
    window: int,
    snapshots: int,
    end_index: int | None = None,
    loading: float | None = None,
) -> CovarianceEstimate:
    """Estimate the covariance from ``snapshots`` delayed windows of length ``window``.

    The snapshot matrix entry (m, k) is the sample at end_index - k - m, so
    the series must hold at least window + snapshots - 1 samples up to and
    including ``end_index`` (default: the last sample). When ``loading`` is
    None a default of 1e-10 times the average diagonal is stored for later
    use by MVDR.
    """
    n_total = len(series)
    if end_index is None:
        end_index = n_total - 1
    if window < 1 or snapshots < 1:
        raise ValueError("window and snapshot counts must be >= 1")
    needed = window + snapshots - 1
    if end_index >= n_total or end_index - needed + 1 < 0:
        raise ValueError(
            f"need {needed} samples ending at index {end_index}, "
            f"series has {n_total}"
        )
    idx = end_index - (np.arange(window)[:, None] + np.arange(snapshots)[None, :])

    if isinstance(series, QuaternionSeries):
        v = series.samples[idx]  # (window, snapshots, 4)
        vh = v.transpose(1, 0, 2).copy()
        vh[..., 1:] = -vh[..., 1:]
        r4 = _kernels.qmm4(v, vh) / snapshots
        r4t = r4.transpose(1, 0, 2).copy()
        r4t[..., 1:] = -r4t[..., 1:]
        r4 = 0.5 * (r4 + r4t)
        matrix: "QMatrix | np.ndarray" = QMatrix(r4)
        trace = float(r4[np.arange(window), np.arange(window), 0].sum())
        model = "quaternion"
    elif isinstance(series, ComplexSeries):
        v = series.samples[idx]
        r = (v @ v.conj().T) / snapshots
        r = 0.5 * (r + r.conj().T)
        matrix = r
        trace = float(r.diagonal().real.sum())
        model = "complex"
    else:
        raise TypeError(f"unsupported series type {type(series).__name__}")

    if loading is None:
        loading = DEFAULT_LOADING_SCALE * trace / window
    return CovarianceEstimate(
        matrix=matrix,
        model=model,
        window=window,
        snapshots=snapshots,
        sample_rate_hz=series.sample_rate_hz,
        loading=float(loading),
    )


def sweep_complex(omega_rad_s: float, window: int, ts: float) -> np.ndarray:
    """Complex sweep vector with entries exp(-i*omega*ts*m), m = 0..window-1."""
    if window < 1:
        raise ValueError("window must be >= 1")
    return np.exp(-1j * omega_rad_s * ts * np.arange(window))


def sweep_quaternion(
    omega_rad_s: float, window: int, ts: float, axis: FrequencyAxis = DEFAULT_AXIS
) -> QMatrix:
    """Quaternion sweep column with entries exp(-mu*omega*ts*m)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    return QMatrix.column(
        [qexp_axis(axis, -omega_rad_s * ts * m) for m in range(window)]
    )


def _grid_thetas(grid_hz: np.ndarray, sample_rate_hz: float) -> np.ndarray:
    return 2.0 * math.pi * np.asarray(grid_hz, dtype=np.float64) / sample_rate_hz


def _check_realness(vec_residue: np.ndarray, scale: float, what: str) -> float:
    worst = float(vec_residue.max() / scale) if vec_residue.size else 0.0
    if worst > REALNESS_RTOL:
        raise RealnessError(
            f"{what}: vector-part residue {worst:.3e} exceeds {REALNESS_RTOL:.1e}"
        )
    logger.debug("%s: max realness residue %.3e", what, worst)
    return worst


def _quad_forms_quaternion(a: QMatrix, thetas: np.ndarray, opnorm: float, what: str):
    q = _kernels.quad_form_grid(a.data, thetas, np.array(DEFAULT_AXIS.components()))
    vec = np.sqrt((q[:, 1:] ** 2).sum(axis=1))
    residue = _check_realness(vec, a.rows * opnorm, what)
    return q[:, 0], residue


def _quad_forms_complex(a: np.ndarray, thetas: np.ndarray, opnorm: float, what: str):
    m = a.shape[0]
    sweeps = np.exp(-1j * np.outer(np.arange(m), thetas))
    y = a @ sweeps
    vals = np.einsum("mg,mg->g", sweeps.conj(), y)
    residue = _check_realness(np.abs(vals.imag), m * opnorm, what)
    return vals.real, residue


def mvdr_spectrum(cov: CovarianceEstimate, grid_hz) -> Spectrum:
    """Minimum-variance spectrum 1 / Re(s^H R^-1 s) over a frequency grid.

    The stored diagonal loading is added before inversion. Raises
    :class:`IllConditionedError` when the loaded covariance is still too
    close to singular.
    """
    grid_hz = np.asarray(grid_hz, dtype=np.float64)
    thetas = _grid_thetas(grid_hz, cov.sample_rate_hz)
    what = f"MVDR/{cov.model}"
    if cov.model == "quaternion":
        r4 = cov.matrix.data.copy()
        r4[np.arange(cov.window), np.arange(cov.window), 0] += cov.loading
        h = adjoint_complex(QMatrix(r4))
        h = 0.5 * (h + h.conj().T)
        eigvals = np.linalg.eigvalsh(h)
        _check_invertible(eigvals)
        rinv = _project_adjoint(np.linalg.inv(h))
        rinv = 0.5 * (rinv + hermitian_transpose(rinv))
        opnorm = 1.0 / float(np.abs(eigvals).min())
        scalars, residue = _quad_forms_quaternion(rinv, thetas, opnorm, what)
    else:
        r = np.asarray(cov.matrix) + cov.loading * np.eye(cov.window)
        eigvals = np.linalg.eigvalsh(r)
        _check_invertible(eigvals)
        rinv = np.linalg.inv(r)
        rinv = 0.5 * (rinv + rinv.conj().T)
        opnorm = 1.0 / float(np.abs(eigvals).min())
        scalars, residue = _quad_forms_complex(rinv, thetas, opnorm, what)
    values = 1.0 / np.maximum(scalars, _denominator_floor(cov.window, opnorm))
    return Spectrum(grid_hz, values, "MVDR", cov.model, residue)


def _denominator_floor(window: int, opnorm: float) -> float:
    # A quadratic form of a PSD matrix is non-negative, but its evaluated
    # value carries rounding noise of order eps * M * ||s||^2 * ||A|| =
    # eps * M^2 * ||A||. Anything below that scale (including rounding-
    # negative values) is numerically zero; flooring there keeps deep nulls
    # at the measurement limit instead of fabricating dynamic range.
    return max(DENOM_FLOOR, np.finfo(np.float64).eps * window * window * opnorm)


def _check_invertible(eigvals: np.ndarray) -> None:
    small = float(np.abs(eigvals).min())
    large = float(np.abs(eigvals).max())
    cond = np.inf if small == 0.0 else large / small
    if cond > COND_LIMIT:
        raise IllConditionedError(
            f"covariance condition estimate {cond:.3e} exceeds {COND_LIMIT:.1e}; "
            "increase the diagonal loading"
        )


def music_spectrum(cov: CovarianceEstimate, noise_dim: int, grid_hz) -> Spectrum:
    """Subspace spectrum 1 / ||s^H U_N||^2 with a noise subspace of ``noise_dim``."""
    grid_hz = np.asarray(grid_hz, dtype=np.float64)
    thetas = _grid_thetas(grid_hz, cov.sample_rate_hz)
    what = f"MUSIC/{cov.model}"
    if cov.model == "quaternion":
        eig = qeig_hermitian(cov.matrix)
        un = noise_subspace(eig, noise_dim)
        proj = qmatmul(un, hermitian_transpose(un))
        proj = 0.5 * (proj + hermitian_transpose(proj))
        scalars, residue = _quad_forms_quaternion(proj, thetas, 1.0, what)
    else:
        r = np.asarray(cov.matrix)
        if not 1 <= noise_dim <= cov.window:
            raise ValueError(f"noise dimension {noise_dim} out of range 1..{cov.window}")
        _, vecs = np.linalg.eigh(r)
        un = vecs[:, :noise_dim]
        proj = un @ un.conj().T
        proj = 0.5 * (proj + proj.conj().T)
        scalars, residue = _quad_forms_complex(proj, thetas, 1.0, what)
    values = 1.0 / np.maximum(scalars, _denominator_floor(cov.window, 1.0))
    return Spectrum(grid_hz, values, "MUSIC", cov.model, residue)


def fourier_spectrum(series: "ComplexSeries | QuaternionSeries", grid_hz) -> Spectrum:
    """Magnitude of the discrete transform with a right-multiplied kernel."""
    grid_hz = np.asarray(grid_hz, dtype=np.float64)
    if len(series) == 0:
        raise ValueError("series must be non-empty")
    thetas = _grid_thetas(grid_hz, series.sample_rate_hz)
    n = len(series)
    if isinstance(series, QuaternionSeries):
        mu4 = np.array([(0.0,) + DEFAULT_AXIS.components()])
        vmu4 = _kernels.qmul4(series.samples, mu4)
        sums = _kernels.fourier_grid(series.samples, vmu4, thetas)
        values = np.sqrt((sums**2).sum(axis=1)) / n
        model = "quaternion"
    elif isinstance(series, ComplexSeries):
        kernel = np.exp(-1j * np.outer(np.arange(n), thetas))
        values = np.abs(series.samples @ kernel) / n
        model = "complex"
    else:
        raise TypeError(f"unsupported series type {type(series).__name__}")
    return Spectrum(grid_hz, values, "FT", model, 0.0)


def find_peaks(spectrum: Spectrum, threshold_db: float) -> list[tuple[float, float]]:
    """Strict local maxima above (global max - threshold_db), refined.

    The grid must be uniform. Each retained maximum is refined by fitting a
    parabola through the three decibel values around it. Returns (frequency,
    linear value) pairs sorted by frequency; pass ``math.inf`` as the
    threshold to keep every strict local maximum.
    """
    grid = spectrum.grid_hz
    if grid.size < 3:
        return []
    steps = np.diff(grid)
    step = float(steps[0])
    if np.abs(steps - step).max() > 1e-9 * max(1.0, abs(step)):
        raise ValueError("find_peaks requires a uniform frequency grid")
    db = 10.0 * np.log10(np.maximum(spectrum.values, DENOM_FLOOR))
    inner = db[1:-1]
    is_max = (inner > db[:-2]) & (inner > db[2:])
    cutoff = db.max() - threshold_db
    peaks = []
    for i in np.nonzero(is_max)[0] + 1:
        if not db[i] > cutoff:
            continue
        denom = db[i - 1] - 2.0 * db[i] + db[i + 1]
        delta = 0.0 if denom == 0.0 else 0.5 * (db[i - 1] - db[i + 1]) / denom
        delta = min(0.5, max(-0.5, delta))
        freq = float(grid[i] + delta * step)
        peak_db = db[i] - 0.25 * (db[i - 1] - db[i + 1]) * delta
        peaks.append((freq, float(10.0 ** (peak_db / 10.0))))
    peaks.sort(key=lambda p: p[0])
    return peaks


def classify_peaks(peaks, pairing_tol_hz: float) -> HarmonicReport:
    """Label mirrored peak pairs as zero-sequence detections.

    Peaks f, f' with |f + f'| <= pairing_tol_hz merge into one zero-sequence
    detection reported at the mean magnitude (|f| + |f'|)/2 with the mirrored
    (more negative) raw frequency retained; everything else is reported as a
    positive-or-negative-sequence detection at its signed frequency.
    """
    peaks = list(peaks)
    used = [False] * len(peaks)
    pairs = []
    for i in range(len(peaks)):
        for j in range(i + 1, len(peaks)):
            miss = abs(peaks[i][0] + peaks[j][0])
            if miss <= pairing_tol_hz:
                pairs.append((miss, i, j))
    pairs.sort()
    detections = []
    for _, i, j in pairs:
        if used[i] or used[j]:
            continue
        used[i] = used[j] = True
        fi, vi = peaks[i]
        fj, vj = peaks[j]
        detections.append(
            Detection(
                frequency_hz=0.5 * (abs(fi) + abs(fj)),
                sequence_class=SequenceClass.ZERO,
                peak_value=0.5 * (vi + vj),
                mirror_frequency_hz=min(fi, fj),
            )
        )
    for i, (freq, value) in enumerate(peaks):
        if not used[i]:
            detections.append(
                Detection(
                    frequency_hz=freq,
                    sequence_class=SequenceClass.POSITIVE_OR_NEGATIVE,
                    peak_value=value,
                )
            )
    detections.sort(key=lambda d: (abs(d.frequency_hz), d.frequency_hz))
    return HarmonicReport(detections)


def estimate_frequency_error(
    report: HarmonicReport,
    truth_hz,
    miss_tolerance_hz: float | None = None,
) -> list[float | None]:
    """Absolute error to the nearest compatible detection per true frequency.

    A zero-sequence detection offers candidates at both +/- its frequency;
    a single detection offers its signed frequency. ``None`` marks a miss
    (no compatible detection, or nearest error beyond ``miss_tolerance_hz``).
    """
    candidates = []
    for det in report.detections:
        if det.sequence_class is SequenceClass.ZERO:
            candidates.extend([det.frequency_hz, -det.frequency_hz])
        else:
            candidates.append(det.frequency_hz)
    errors: list[float | None] = []
    for f_true in truth_hz:
        if not candidates:
            errors.append(None)
            continue
        err = min(abs(f_true - c) for c in candidates)
        if miss_tolerance_hz is not None and err > miss_tolerance_hz:
            errors.append(None)
        else:
            errors.append(err)
    return errors
