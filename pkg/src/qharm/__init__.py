"""qharm: quaternion-domain spectral estimation of three-phase power harmonics.

Embeds balanced three-phase voltages either as the classical Clarke complex
signal or as a pure quaternion signal i*va + j*vb + k*vc, and estimates
harmonic frequencies with Fourier, MVDR, and MUSIC spectra. The quaternion
embedding keeps zero-sequence harmonics (orders divisible by three) that the
Clarke transform cancels; they show up as mirrored +/-f peak pairs.
"""

from ._kernels import HAVE_C_KERNELS, available_backends, get_backend, set_backend
from .estimators import (
    CovarianceEstimate,
    Detection,
    HarmonicReport,
    RealnessError,
    SequenceClass,
    Spectrum,
    build_covariance,
    classify_peaks,
    estimate_frequency_error,
    find_peaks,
    fourier_spectrum,
    music_spectrum,
    mvdr_spectrum,
    sweep_complex,
    sweep_quaternion,
)
from .experiment import (
    ExperimentConfig,
    MonteCarloResult,
    MonteCarloRow,
    SpectrumRunResult,
    run_montecarlo,
    run_simulate,
    run_spectrum,
    spectra_for_trial,
    trial_series,
)
from .linalg import (
    EigenDecomposition,
    IllConditionedError,
    QMatrix,
    StructureError,
    adjoint_complex,
    from_adjoint,
    hermitian_transpose,
    noise_subspace,
    qeig_hermitian,
    qmatmul,
    qsolve_hermitian,
)
from .quaternion import (
    DEFAULT_AXIS,
    ONE,
    FrequencyAxis,
    I,
    J,
    K,
    Quaternion,
    axis_commutator_sign,
    qconj,
    qexp_axis,
    qinv,
    qmul,
    qnorm,
)
from .signal_model import (
    ComplexSeries,
    QuaternionSeries,
    ThreePhaseConfig,
    ThreePhaseFrame,
    ThreePhaseSeries,
    analytic_complex_decomposition,
    analytic_quaternion_decomposition,
    clarke,
    complex_signal,
    gen_three_phase,
    quaternion_signal,
    snr_to_sigma,
)

__version__ = "0.1.0"

__all__ = [
    "HAVE_C_KERNELS",
    "available_backends",
    "get_backend",
    "set_backend",
    "CovarianceEstimate",
    "Detection",
    "HarmonicReport",
    "RealnessError",
    "SequenceClass",
    "Spectrum",
    "build_covariance",
    "classify_peaks",
    "estimate_frequency_error",
    "find_peaks",
    "fourier_spectrum",
    "music_spectrum",
    "mvdr_spectrum",
    "sweep_complex",
    "sweep_quaternion",
    "ExperimentConfig",
    "MonteCarloResult",
    "MonteCarloRow",
    "SpectrumRunResult",
    "run_montecarlo",
    "run_simulate",
    "run_spectrum",
    "spectra_for_trial",
    "trial_series",
    "EigenDecomposition",
    "IllConditionedError",
    "QMatrix",
    "StructureError",
    "adjoint_complex",
    "from_adjoint",
    "hermitian_transpose",
    "noise_subspace",
    "qeig_hermitian",
    "qmatmul",
    "qsolve_hermitian",
    "DEFAULT_AXIS",
    "ONE",
    "FrequencyAxis",
    "I",
    "J",
    "K",
    "Quaternion",
    "axis_commutator_sign",
    "qconj",
    "qexp_axis",
    "qinv",
    "qmul",
    "qnorm",
    "ComplexSeries",
    "QuaternionSeries",
    "ThreePhaseConfig",
    "ThreePhaseFrame",
    "ThreePhaseSeries",
    "analytic_complex_decomposition",
    "analytic_quaternion_decomposition",
    "clarke",
    "complex_signal",
    "gen_three_phase",
    "quaternion_signal",
    "snr_to_sigma",
    "__version__",
]
