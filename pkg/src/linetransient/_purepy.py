"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both implementations perform the same floating-point operations in the same
order; keep them in sync.
"""

import math

import numpy as np


def rk4_sine_lti2(a00, a01, a10, a11, b0, b1, amp, omega, dt, k_start, n_samples):
    """Classical RK4 for a 2-state LTI system driven by ``amp*sin(omega*t)``.

    The state is zero up to and including sample ``k_start``; integration
    runs from ``t = k_start*dt`` to ``t = (n_samples - 1)*dt``.

    Returns ``(x0, x1, bad)`` where ``bad`` is the first sample index holding
    a non-finite state, or -1.
    """
    x0 = np.zeros(n_samples)
    x1 = np.zeros(n_samples)
    out0 = [0.0] * n_samples
    out1 = [0.0] * n_samples
    sin = math.sin
    isfinite = math.isfinite
    half = 0.5 * dt
    sixth = dt / 6.0
    x = 0.0
    y = 0.0
    bad = -1
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
    x0[:] = out0
    x1[:] = out1
    return x0, x1, bad


def fft_radix2(samples):
    """Unnormalized forward DFT by iterative radix-2 decimation in time."""
    data = [complex(v) for v in samples]
    n = len(data)
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")

    # bit-reversal permutation
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            data[i], data[j] = data[j], data[i]

    twiddle = [complex(math.cos(2.0 * math.pi * k / n), -math.sin(2.0 * math.pi * k / n))
               for k in range(n // 2)]

    size = 2
    while size <= n:
        half = size >> 1
        stride = n // size
        for start in range(0, n, size):
            for k in range(half):
                w = twiddle[k * stride]
                a = data[start + k]
                b = data[start + k + half] * w
                data[start + k] = a + b
                data[start + k + half] = a - b
        size <<= 1
    return np.array(data, dtype=complex)
