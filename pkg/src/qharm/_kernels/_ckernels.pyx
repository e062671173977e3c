# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled quaternion kernels. Semantics match _pykernels exactly; arrays are
# C-contiguous float64 with a trailing (w, x, y, z) component axis.

import numpy as np

from libc.math cimport cos, sin


def qmm4(const double[:, :, ::1] a, const double[:, :, ::1] b):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t kk = a.shape[1]
    cdef Py_ssize_t m = b.shape[1]
    out = np.zeros((n, m, 4))
    cdef double[:, :, ::1] o = out
    cdef Py_ssize_t r, t, c
    cdef double aw, ax, ay, az, bw, bx, by, bz
    for r in range(n):
        for t in range(kk):
            aw = a[r, t, 0]; ax = a[r, t, 1]; ay = a[r, t, 2]; az = a[r, t, 3]
            for c in range(m):
                bw = b[t, c, 0]; bx = b[t, c, 1]; by = b[t, c, 2]; bz = b[t, c, 3]
                o[r, c, 0] += aw * bw - ax * bx - ay * by - az * bz
                o[r, c, 1] += aw * bx + ax * bw + ay * bz - az * by
                o[r, c, 2] += aw * by - ax * bz + ay * bw + az * bx
                o[r, c, 3] += aw * bz + ax * by - ay * bx + az * bw
    return out


def quad_form_grid(const double[:, :, ::1] a4, const double[::1] thetas, const double[::1] mu):
    cdef Py_ssize_t m_count = a4.shape[0]
    cdef Py_ssize_t n_grid = thetas.shape[0]
    cdef double mux = mu[0], muy = mu[1], muz = mu[2]
    out = np.empty((n_grid, 4))
    cdef double[:, ::1] o = out
    sweep_arr = np.empty((m_count, 4))
    cdef double[:, ::1] sw = sweep_arr
    cdef Py_ssize_t g, r, c
    cdef double th, ang, cs, sn, f
    cdef double aw, ax, ay, az, bw, bx, by, bz
    cdef double yw, yx, yy, yz
    cdef double qw, qx, qy, qz
    for g in range(n_grid):
        th = thetas[g]
        for r in range(m_count):
            ang = r * th
            cs = cos(ang)
            sn = sin(ang)
            sw[r, 0] = cs
            sw[r, 1] = -mux * sn
            sw[r, 2] = -muy * sn
            sw[r, 3] = -muz * sn
        qw = qx = qy = qz = 0.0
        for r in range(m_count):
            # y_r = (A s)_r
            yw = yx = yy = yz = 0.0
            for c in range(m_count):
                aw = a4[r, c, 0]; ax = a4[r, c, 1]; ay = a4[r, c, 2]; az = a4[r, c, 3]
                bw = sw[c, 0]; bx = sw[c, 1]; by = sw[c, 2]; bz = sw[c, 3]
                yw += aw * bw - ax * bx - ay * by - az * bz
                yx += aw * bx + ax * bw + ay * bz - az * by
                yy += aw * by - ax * bz + ay * bw + az * bx
                yz += aw * bz + ax * by - ay * bx + az * bw
            # accumulate conj(s_r) * y_r
            aw = sw[r, 0]; ax = -sw[r, 1]; ay = -sw[r, 2]; az = -sw[r, 3]
            qw += aw * yw - ax * yx - ay * yy - az * yz
            qx += aw * yx + ax * yw + ay * yz - az * yy
            qy += aw * yy - ax * yz + ay * yw + az * yx
            qz += aw * yz + ax * yy - ay * yx + az * yw
        o[g, 0] = qw
        o[g, 1] = qx
        o[g, 2] = qy
        o[g, 3] = qz
    return out


def fourier_grid(const double[:, ::1] v4, const double[:, ::1] vmu4, const double[::1] thetas):
    cdef Py_ssize_t n_count = v4.shape[0]
    cdef Py_ssize_t n_grid = thetas.shape[0]
    out = np.empty((n_grid, 4))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t g, n
    cdef double th, ang, cs, sn
    cdef double qw, qx, qy, qz
    for g in range(n_grid):
        th = thetas[g]
        qw = qx = qy = qz = 0.0
        for n in range(n_count):
            ang = n * th
            cs = cos(ang)
            sn = sin(ang)
            qw += v4[n, 0] * cs - vmu4[n, 0] * sn
            qx += v4[n, 1] * cs - vmu4[n, 1] * sn
            qy += v4[n, 2] * cs - vmu4[n, 2] * sn
            qz += v4[n, 3] * cs - vmu4[n, 3] * sn
        o[g, 0] = qw
        o[g, 1] = qx
        o[g, 2] = qy
        o[g, 3] = qz
    return out
