# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_purepy`` operation for operation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, isfinite, M_PI

cnp.import_array()


def rk4_sine_lti2(double a00, double a01, double a10, double a11,
                  double b0, double b1, double amp, double omega, double dt,
                  Py_ssize_t k_start, Py_ssize_t n_samples):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x0_arr = np.zeros(n_samples)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x1_arr = np.zeros(n_samples)
    cdef double[::1] out0 = x0_arr
    cdef double[::1] out1 = x1_arr
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef double x = 0.0, y = 0.0
    cdef double t0, th, t1, u0, uh, u1, xs, ys
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y
    cdef Py_ssize_t k, bad = -1

    with nogil:
        for k in range(k_start, n_samples - 1):
            t0 = k * dt
            th = t0 + half
            t1 = (k + 1) * dt
            u0 = amp * sin(omega * t0)
            uh = amp * sin(omega * th)
            u1 = amp * sin(omega * t1)

            k1x = a00 * x + a01 * y + b0 * u0
            k1y = a10 * x + a11 * y + b1 * u0
            xs = x + half * k1x
            ys = y + half * k1y
            k2x = a00 * xs + a01 * ys + b0 * uh
            k2y = a10 * xs + a11 * ys + b1 * uh
            xs = x + half * k2x
            ys = y + half * k2y
            k3x = a00 * xs + a01 * ys + b0 * uh
            k3y = a10 * xs + a11 * ys + b1 * uh
            xs = x + dt * k3x
            ys = y + dt * k3y
            k4x = a00 * xs + a01 * ys + b0 * u1
            k4y = a10 * xs + a11 * ys + b1 * u1

            x = x + sixth * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + sixth * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            out0[k + 1] = x
            out1[k + 1] = y
            if not (isfinite(x) and isfinite(y)):
                bad = k + 1
                break
    return x0_arr, x1_arr, bad


def fft_radix2(samples):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = np.array(samples, dtype=np.complex128).ravel()
    cdef double complex[::1] data = arr
    cdef Py_ssize_t n = data.shape[0]
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] tw_arr = np.empty(n // 2, dtype=np.complex128)
    cdef double complex[::1] twiddle = tw_arr
    cdef Py_ssize_t i, j, bit, k, size, half, stride, start
    cdef double complex w, a, b, tmp

    with nogil:
        j = 0
        for i in range(1, n):
            bit = n >> 1
            while j & bit:
                j ^= bit
                bit >>= 1
            j |= bit
            if i < j:
                tmp = data[i]
                data[i] = data[j]
                data[j] = tmp

        for k in range(n // 2):
            twiddle[k].real = cos(2.0 * M_PI * k / n)
            twiddle[k].imag = -sin(2.0 * M_PI * k / n)

        size = 2
        while size <= n:
            half = size >> 1
            stride = n // size
            start = 0
            while start < n:
                for k in range(half):
                    w = twiddle[k * stride]
                    a = data[start + k]
                    b = data[start + k + half] * w
                    data[start + k] = a + b
                    data[start + k + half] = a - b
                start += size
            size <<= 1
    return arr
