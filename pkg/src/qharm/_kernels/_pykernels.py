"""Numpy implementations of the hot numeric kernels.

This is the fallback backend: same call surface and semantics as the compiled
extension, implemented with vectorized numpy. Quaternion arrays use a trailing
axis of length 4 in (w, x, y, z) component order.
"""

from __future__ import annotations

import numpy as np

# Grid-sweep kernels materialize (n_points, n_grid) trigonometric tables;
# chunk the grid so peak memory stays bounded.
_CHUNK_ELEMENTS = 4 << 20


def qmul4(a, b):
    """Elementwise quaternion product of broadcastable (..., 4) arrays."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj4(a):
    """Elementwise quaternion conjugate of a (..., 4) array."""
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qmm4(a, b):
    """Quaternion matrix product of (n, k, 4) and (k, m, 4) arrays.

    Entry (r, c) is the ordered sum over t of a[r, t] * b[t, c].
    """
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw @ bw - ax @ bx - ay @ by - az @ bz,
            aw @ bx + ax @ bw + ay @ bz - az @ by,
            aw @ by - ax @ bz + ay @ bw + az @ bx,
            aw @ bz + ax @ by - ay @ bx + az @ bw,
        ],
        axis=-1,
    )


def quad_form_grid(a4, thetas, mu):
    """Quadratic forms s(theta)^H A s(theta) over a grid of phase steps.

    The sweep vector has entries s_m = cos(m*theta) - mu*sin(m*theta) for
    m = 0..M-1, with mu the pure unit axis given by its (x, y, z) components.
    The form is evaluated as s^H (A s), preserving factor order.

    Returns a (len(thetas), 4) array of quaternion values.
    """
    a4 = np.asarray(a4, dtype=np.float64)
    thetas = np.asarray(thetas, dtype=np.float64)
    m_count = a4.shape[0]
    out = np.empty((thetas.shape[0], 4))
    chunk = max(1, _CHUNK_ELEMENTS // max(1, 4 * m_count))
    marange = np.arange(m_count)
    for lo in range(0, thetas.shape[0], chunk):
        th = thetas[lo : lo + chunk]
        ang = np.outer(marange, th)
        c = np.cos(ang)
        s = np.sin(ang)
        sweep = np.empty((m_count, th.shape[0], 4))
        sweep[..., 0] = c
        sweep[..., 1] = -mu[0] * s
        sweep[..., 2] = -mu[1] * s
        sweep[..., 3] = -mu[2] * s
        y = qmm4(a4, sweep)
        out[lo : lo + chunk] = qmul4(qconj4(sweep), y).sum(axis=0)
    return out


def fourier_grid(v4, vmu4, thetas):
    """Accumulate sum_n v_n * (cos(n*theta) - mu*sin(n*theta)) over a grid.

    ``vmu4`` must hold the precomputed right products v_n * mu. Returns a
    (len(thetas), 4) array of raw quaternion sums (no normalization).
    """
    v4 = np.asarray(v4, dtype=np.float64)
    vmu4 = np.asarray(vmu4, dtype=np.float64)
    thetas = np.asarray(thetas, dtype=np.float64)
    n_count = v4.shape[0]
    narange = np.arange(n_count)
    out = np.empty((thetas.shape[0], 4))
    chunk = max(1, _CHUNK_ELEMENTS // max(1, n_count))
    for lo in range(0, thetas.shape[0], chunk):
        th = thetas[lo : lo + chunk]
        ang = np.outer(narange, th)
        c = np.cos(ang)
        s = np.sin(ang)
        out[lo : lo + chunk] = (v4.T @ c - vmu4.T @ s).T
    return out
