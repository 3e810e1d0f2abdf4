"""Hot numeric loops, with numba and pure-numpy implementations.

Set ``REFLECTAP_DISABLE_NUMBA=1`` to force the numpy path. Both paths compute
the same sums; they agree to round-off, not bit for bit.
"""

import os

import numpy as np

_DISABLED = os.environ.get("REFLECTAP_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def _exp_convolve_loop(u, r):
    # out[i] = sum_j r**|i-j| * u[j], via one forward and one backward recurrence
    n = u.shape[0]
    left = np.empty(n)
    right = np.empty(n)
    acc = 0.0
    for i in range(n):
        acc = r * acc + u[i]
        left[i] = acc
    acc = 0.0
    for i in range(n - 1, -1, -1):
        acc = r * acc + u[i]
        right[i] = acc
    out = np.empty(n)
    for i in range(n):
        out[i] = left[i] + right[i] - u[i]
    return out


def exp_convolve_numpy(u, r):
    """Symmetric exponential convolution ``sum_j r**|i-j| u[j]`` by FFT."""
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    if n == 0:
        return u.copy()
    k = np.arange(-(n - 1), n)
    kernel = r ** np.abs(k)
    size = 1 << int(np.ceil(np.log2(3 * n - 2)))
    full = np.fft.irfft(np.fft.rfft(u, size) * np.fft.rfft(kernel, size), size)
    return full[n - 1 : 2 * n - 1]


def _rk4_sweep_loop(a, b, h, g_plus, g_minus, y0):
    # g_plus[k] = g(k*h/2), g_minus[k] = g(-k*h/2); h may be negative
    n = (g_plus.shape[0] - 1) // 2
    out = np.empty((n + 1, 4))
    y1, y2, y3, y4 = y0[0], y0[1], y0[2], y0[3]
    out[0, 0] = y1
    out[0, 1] = y2
    out[0, 2] = y3
    out[0, 3] = y4
    hh = 0.5 * h
    for k in range(n):
        gp0 = g_plus[2 * k]
        gp1 = g_plus[2 * k + 1]
        gp2 = g_plus[2 * k + 2]
        gm0 = g_minus[2 * k]
        gm1 = g_minus[2 * k + 1]
        gm2 = g_minus[2 * k + 2]

        k11 = y3
        k12 = -y4
        k13 = -a * y1 - b * y2 + gp0
        k14 = b * y1 + a * y2 - gm0

        z1 = y1 + hh * k11
        z2 = y2 + hh * k12
        z3 = y3 + hh * k13
        z4 = y4 + hh * k14
        k21 = z3
        k22 = -z4
        k23 = -a * z1 - b * z2 + gp1
        k24 = b * z1 + a * z2 - gm1

        z1 = y1 + hh * k21
        z2 = y2 + hh * k22
        z3 = y3 + hh * k23
        z4 = y4 + hh * k24
        k31 = z3
        k32 = -z4
        k33 = -a * z1 - b * z2 + gp1
        k34 = b * z1 + a * z2 - gm1

        z1 = y1 + h * k31
        z2 = y2 + h * k32
        z3 = y3 + h * k33
        z4 = y4 + h * k34
        k41 = z3
        k42 = -z4
        k43 = -a * z1 - b * z2 + gp2
        k44 = b * z1 + a * z2 - gm2

        y1 = y1 + h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
        y2 = y2 + h / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
        y3 = y3 + h / 6.0 * (k13 + 2.0 * k23 + 2.0 * k33 + k43)
        y4 = y4 + h / 6.0 * (k14 + 2.0 * k24 + 2.0 * k34 + k44)
        out[k + 1, 0] = y1
        out[k + 1, 1] = y2
        out[k + 1, 2] = y3
        out[k + 1, 3] = y4
    return out


if HAS_NUMBA:
    exp_convolve_numba = njit(cache=False)(_exp_convolve_loop)
    _rk4_sweep_impl = njit(cache=False)(_rk4_sweep_loop)
else:
    exp_convolve_numba = None
    _rk4_sweep_impl = _rk4_sweep_loop


def exp_convolve(u, r):
    """Return ``out[i] = sum_j r**|i-j| * u[j]`` for ``0 < r < 1``.

    Uses the O(n) two-sided recurrence when numba is active and an FFT
    convolution otherwise.
    """
    u = np.ascontiguousarray(u, dtype=float)
    if HAS_NUMBA:
        return exp_convolve_numba(u, float(r))
    return exp_convolve_numpy(u, float(r))


def rk4_sweep(a, b, h, g_plus, g_minus, y0):
    """Fixed-step RK4 on the four-dimensional reflection system.

    Parameters
    ----------
    a, b : float
        Equation coefficients.
    h : float
        Signed step; negative sweeps toward negative time.
    g_plus, g_minus : ndarray, shape (2n+1,)
        Forcing sampled at ``k*h/2`` and at ``-k*h/2``.
    y0 : ndarray, shape (4,)
        State ``(x(0), x(-0), x'(0), x'(-0))``.

    Returns
    -------
    ndarray, shape (n+1, 4)
    """
    return _rk4_sweep_impl(
        float(a),
        float(b),
        float(h),
        np.ascontiguousarray(g_plus, dtype=float),
        np.ascontiguousarray(g_minus, dtype=float),
        np.ascontiguousarray(y0, dtype=float),
    )
