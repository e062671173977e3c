"""Balanced three-phase signal generation and its one-channel embeddings.

The generator produces

    v_a(n) = sum_h V_h cos(h*(w0*n*Ts + phi))          + noise
    v_b(n) = sum_h V_h cos(h*(w0*n*Ts + phi - 2pi/3))  + noise
    v_c(n) = sum_h V_h cos(h*(w0*n*Ts + phi + 2pi/3))  + noise

with the phase offsets inside the harmonic factor. Two single-channel
embeddings are provided: the classical Clarke alpha/beta pair merged into a
complex signal, and the quaternion embedding i*v_a + j*v_b + k*v_c. Harmonic
orders divisible by 3 are cophasial across the three phases, vanish under the
Clarke transform, and survive in the quaternion signal with amplitude
sqrt(3)*V_h; the closed-form decompositions below make those facts testable
against the generated samples.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .quaternion import DEFAULT_AXIS, Quaternion, qexp_axis

# Clarke transform, 2/3-scaled so a balanced unit fundamental maps to a unit
# complex phasor.
CLARKE_MATRIX = (2.0 / 3.0) * np.array(
    [[1.0, -0.5, -0.5], [0.0, math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0]]
)

_POSITIVE_COEFF = Quaternion(0.0, 1.0, -0.5, -0.5)  # (2i - j - k)/2
_ZERO_COEFF = Quaternion(0.0, 0.5, 0.5, 0.5)  # (i + j + k)/2


class ThreePhaseFrame(tuple):
    """One time sample of the three phase voltages (va, vb, vc)."""

    __slots__ = ()

    def __new__(cls, va: float, vb: float, vc: float):
        return super().__new__(cls, (float(va), float(vb), float(vc)))

    @property
    def va(self) -> float:
        return self[0]

    @property
    def vb(self) -> float:
        return self[1]

    @property
    def vc(self) -> float:
        return self[2]


@dataclass(frozen=True)
class ThreePhaseConfig:
    """Generator parameters for the balanced three-phase model.

    ``harmonics`` lists (order, absolute amplitude) pairs; orders must be
    distinct positive integers below the Nyquist limit. ``noise_sigma`` is the
    per-phase standard deviation of the additive Gaussian noise.
    """

    fundamental_hz: float
    sample_rate_hz: float
    phase_rad: float = 0.0
    harmonics: tuple[tuple[int, float], ...] = ((1, 1.0),)
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.fundamental_hz <= 0:
            raise ValueError("fundamental frequency must be positive")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample rate must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise sigma must be non-negative")
        harmonics = tuple((int(h), float(v)) for h, v in self.harmonics)
        object.__setattr__(self, "harmonics", harmonics)
        orders = [h for h, _ in harmonics]
        if len(set(orders)) != len(orders):
            raise ValueError("harmonic orders must be distinct")
        for h, amp in harmonics:
            if h < 1:
                raise ValueError(f"harmonic order {h} must be >= 1")
            if amp < 0:
                raise ValueError(f"harmonic amplitude {amp} must be >= 0")
            if h * self.fundamental_hz >= self.sample_rate_hz / 2:
                raise ValueError(
                    f"harmonic {h} at {h * self.fundamental_hz} Hz aliases; "
                    f"Nyquist is {self.sample_rate_hz / 2} Hz"
                )

    @property
    def fundamental_amplitude(self) -> float:
        for h, amp in self.harmonics:
            if h == 1:
                return amp
        return 0.0


@dataclass(eq=False)
class ThreePhaseSeries:
    """Sampled three-phase voltages as an (N, 3) array."""

    samples: np.ndarray
    sample_rate_hz: float
    first_index: int = 0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64).reshape(-1, 3)

    def __len__(self) -> int:
        return self.samples.shape[0]

    def frame(self, i: int) -> ThreePhaseFrame:
        return ThreePhaseFrame(*self.samples[i])


@dataclass(eq=False)
class ComplexSeries:
    """Complex-embedded signal samples."""

    samples: np.ndarray
    sample_rate_hz: float
    first_index: int = 0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128).ravel()

    def __len__(self) -> int:
        return self.samples.shape[0]


@dataclass(eq=False)
class QuaternionSeries:
    """Quaternion-embedded signal samples, stored as an (N, 4) array."""

    samples: np.ndarray
    sample_rate_hz: float
    first_index: int = 0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64).reshape(-1, 4)

    def __len__(self) -> int:
        return self.samples.shape[0]

    def sample(self, i: int) -> Quaternion:
        return Quaternion(*self.samples[i])


def gen_three_phase(config: ThreePhaseConfig, first_index: int = 0, count: int = 0) -> ThreePhaseSeries:
    """Generate ``count`` samples starting at absolute sample index ``first_index``.

    Deterministic for a given (config, first_index, count): the noise stream
    is drawn from a generator seeded with ``config.seed``.
    """
    n = first_index + np.arange(count)
    theta = 2.0 * math.pi * config.fundamental_hz * n / config.sample_rate_hz + config.phase_rad
    offsets = np.array([0.0, -2.0 * math.pi / 3.0, 2.0 * math.pi / 3.0])
    samples = np.zeros((count, 3))
    for h, amp in config.harmonics:
        samples += amp * np.cos(h * (theta[:, None] + offsets[None, :]))
    if config.noise_sigma > 0:
        rng = np.random.default_rng(config.seed)
        samples += rng.normal(0.0, config.noise_sigma, size=(count, 3))
    return ThreePhaseSeries(samples, config.sample_rate_hz, first_index)


def clarke(frames) -> np.ndarray:
    """Clarke transform of (..., 3) phase samples to (..., 2) alpha/beta pairs.

    Accepts a single frame (returns a length-2 array) or a whole series array.
    """
    arr = np.asarray(frames, dtype=np.float64)
    return arr @ CLARKE_MATRIX.T


def complex_signal(series: ThreePhaseSeries) -> ComplexSeries:
    """Clarke-transform a three-phase series and merge to alpha + i*beta."""
    ab = clarke(series.samples)
    return ComplexSeries(ab[:, 0] + 1j * ab[:, 1], series.sample_rate_hz, series.first_index)


def quaternion_signal(series: ThreePhaseSeries) -> QuaternionSeries:
    """Embed a three-phase series as i*va + j*vb + k*vc (zero scalar part)."""
    n = len(series)
    samples = np.zeros((n, 4))
    samples[:, 1:] = series.samples
    return QuaternionSeries(samples, series.sample_rate_hz, series.first_index)


def analytic_complex_decomposition(config: ThreePhaseConfig, n: int) -> complex:
    """Closed-form noiseless complex signal at sample index n.

    Harmonic orders congruent to 1 mod 3 rotate positively, orders congruent
    to 2 mod 3 rotate negatively, and multiples of 3 cancel exactly.
    """
    theta = 2.0 * math.pi * config.fundamental_hz * n / config.sample_rate_hz + config.phase_rad
    total = 0.0 + 0.0j
    for h, amp in config.harmonics:
        if h % 3 == 1:
            total += amp * np.exp(1j * h * theta)
        elif h % 3 == 2:
            total += amp * np.exp(-1j * h * theta)
        # multiples of 3 vanish under the Clarke transform
    return complex(total)


def analytic_quaternion_decomposition(config: ThreePhaseConfig, n: int) -> Quaternion:
    """Closed-form noiseless quaternion signal at sample index n.

    Sum of three kinds of terms along the default axis mu = (i+j+k)/sqrt(3):

    - orders h = 1 mod 3:  (2i-j-k)/2 * V_h * exp(-mu*h*theta)
    - orders h = 2 mod 3:  (2i-j-k)/2 * V_h * exp(+mu*h*theta)
    - orders h = 0 mod 3:  (i+j+k)/2 * V_h * (exp(+mu*h*theta) + exp(-mu*h*theta))

    with theta = w0*n*Ts + phi. Equals the direct embedding of the noiseless
    generator output.
    """
    theta = 2.0 * math.pi * config.fundamental_hz * n / config.sample_rate_hz + config.phase_rad
    total = Quaternion()
    for h, amp in config.harmonics:
        if h % 3 == 1:
            total = total + _POSITIVE_COEFF * amp * qexp_axis(DEFAULT_AXIS, -h * theta)
        elif h % 3 == 2:
            total = total + _POSITIVE_COEFF * amp * qexp_axis(DEFAULT_AXIS, h * theta)
        else:
            both = qexp_axis(DEFAULT_AXIS, h * theta) + qexp_axis(DEFAULT_AXIS, -h * theta)
            total = total + _ZERO_COEFF * amp * both
    return total


def snr_to_sigma(snr_db: float, v1: float) -> float:
    """Per-phase noise standard deviation for a target SNR in dB.

    SNR is referenced to the fundamental's mean power v1^2/2 against the
    per-phase noise variance. An infinite SNR maps to zero noise.
    """
    if v1 <= 0:
        raise ValueError("fundamental amplitude must be positive to size noise from SNR")
    if math.isinf(snr_db):
        return 0.0
    return math.sqrt((v1 * v1 / 2.0) / 10.0 ** (snr_db / 10.0))


_FMT = "{:.17g}"


def write_three_phase_csv(series: ThreePhaseSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "va", "vb", "vc"])
        for i, row in enumerate(series.samples):
            writer.writerow([series.first_index + i] + [_FMT.format(v) for v in row])


def write_quaternion_csv(series: QuaternionSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "w", "x", "y", "z"])
        for i, row in enumerate(series.samples):
            writer.writerow([series.first_index + i] + [_FMT.format(v) for v in row])


def write_complex_csv(series: ComplexSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "re", "im"])
        for i, v in enumerate(series.samples):
            writer.writerow(
                [series.first_index + i, _FMT.format(v.real), _FMT.format(v.imag)]
            )


def read_three_phase_csv(path, sample_rate_hz: float) -> ThreePhaseSeries:
    rows = _read_rows(path, ["n", "va", "vb", "vc"])
    first = int(rows[0][0]) if rows else 0
    data = np.array([[float(v) for v in row[1:]] for row in rows]).reshape(-1, 3)
    return ThreePhaseSeries(data, sample_rate_hz, first)


def read_quaternion_csv(path, sample_rate_hz: float) -> QuaternionSeries:
    rows = _read_rows(path, ["n", "w", "x", "y", "z"])
    first = int(rows[0][0]) if rows else 0
    data = np.array([[float(v) for v in row[1:]] for row in rows]).reshape(-1, 4)
    return QuaternionSeries(data, sample_rate_hz, first)


def read_complex_csv(path, sample_rate_hz: float) -> ComplexSeries:
    rows = _read_rows(path, ["n", "re", "im"])
    first = int(rows[0][0]) if rows else 0
    data = np.array([float(r[1]) + 1j * float(r[2]) for r in rows], dtype=np.complex128)
    return ComplexSeries(data, sample_rate_hz, first)


def _read_rows(path, expected_header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != expected_header:
            raise ValueError(f"unexpected header {header!r} in {path}")
        return list(reader)
