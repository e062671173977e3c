"""Kernel backend selection.

The hot numeric loops (quaternion matrix products, spectrum sweeps, transform
accumulation) exist in two interchangeable implementations: a Cython extension
(``_ckernels``) and a vectorized numpy fallback (``_pykernels``). The compiled
backend is used when importable; set the environment variable
``QHARM_KERNEL_BACKEND`` to ``c`` or ``python`` to force one, or call
:func:`set_backend` at runtime (used by the parity tests and the benchmark).
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels

    HAVE_C_KERNELS = True
except ImportError:
    _ckernels = None
    HAVE_C_KERNELS = False

_BACKENDS = {"python": _pykernels}
if HAVE_C_KERNELS:
    _BACKENDS["c"] = _ckernels

qmul4 = _pykernels.qmul4
qconj4 = _pykernels.qconj4


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def _initial_backend() -> str:
    requested = os.environ.get("QHARM_KERNEL_BACKEND", "auto").lower()
    if requested in ("auto", ""):
        return "c" if HAVE_C_KERNELS else "python"
    if requested not in _BACKENDS:
        raise RuntimeError(
            f"QHARM_KERNEL_BACKEND={requested!r} is not available; "
            f"choose from {available_backends()} or 'auto'"
        )
    return requested


_active_name = _initial_backend()
_active = _BACKENDS[_active_name]


def get_backend() -> str:
    return _active_name


def set_backend(name: str) -> None:
    global _active_name, _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active_name = name
    _active = _BACKENDS[name]


def _c3(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def qmm4(a, b):
    """Quaternion matrix product of (n, k, 4) by (k, m, 4) component arrays."""
    a = _c3(a)
    b = _c3(b)
    if a.ndim != 3 or b.ndim != 3 or a.shape[2] != 4 or b.shape[2] != 4:
        raise ValueError("expected (rows, cols, 4) quaternion component arrays")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape[:2]} @ {b.shape[:2]}")
    return np.asarray(_active.qmm4(a, b))


def quad_form_grid(a4, thetas, mu):
    """Evaluate s(theta)^H A s(theta) for every theta; returns (G, 4)."""
    return np.asarray(
        _active.quad_form_grid(_c3(a4), _c3(thetas).ravel(), _c3(mu).ravel())
    )


def fourier_grid(v4, vmu4, thetas):
    """Accumulate sum_n v_n * exp(-mu * n * theta) for every theta; returns (G, 4)."""
    return np.asarray(
        _active.fourier_grid(
            np.ascontiguousarray(v4, dtype=np.float64),
            np.ascontiguousarray(vmu4, dtype=np.float64),
            _c3(thetas).ravel(),
        )
    )
