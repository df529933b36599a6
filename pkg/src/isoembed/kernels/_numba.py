"""numba loop versions of the kernels in ``_numpy``."""
import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def fbp_eval(zeros, mults, consts, gamma, z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        zi = z[i]
        acc = gamma
        for k in range(zeros.shape[0]):
            f = consts[k] * (zeros[k] - zi) / (1.0 - zeros[k].conjugate() * zi)
            for _ in range(mults[k]):
                acc *= f
        out[i] = acc
    return out


@njit(cache=True)
def fbp_poisson(zeros, mults, t):
    out = np.zeros(t.shape[0], dtype=np.float64)
    for i in range(t.shape[0]):
        acc = 0.0
        for k in range(zeros.shape[0]):
            d = t[i] - zeros[k]
            acc += mults[k] * (1.0 - abs(zeros[k]) ** 2) / (d.real * d.real + d.imag * d.imag)
        out[i] = acc
    return out


@njit(cache=True)
def fbp_logderiv(zeros, mults, z):
    out = np.zeros(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        zi = z[i]
        acc = 0j
        for k in range(zeros.shape[0]):
            zk = zeros[k]
            acc += mults[k] * (1.0 - abs(zk) ** 2) / ((1.0 - zk.conjugate() * zi) * (zi - zk))
        out[i] = zi * acc
    return out


@njit(cache=True)
def _phase_scalar(zeros, mults, theta):
    c = math.cos(theta)
    s = math.sin(theta)
    acc = 0.0
    for k in range(zeros.shape[0]):
        # 1 - z_k e^{-i theta}
        re = 1.0 - (zeros[k].real * c + zeros[k].imag * s)
        im = -(zeros[k].imag * c - zeros[k].real * s)
        acc += mults[k] * (theta + 2.0 * math.atan2(im, re))
    return acc


@njit(cache=True)
def _poisson_scalar(zeros, mults, theta):
    c = math.cos(theta)
    s = math.sin(theta)
    acc = 0.0
    for k in range(zeros.shape[0]):
        dr = c - zeros[k].real
        di = s - zeros[k].imag
        acc += mults[k] * (1.0 - abs(zeros[k]) ** 2) / (dr * dr + di * di)
    return acc


@njit(cache=True)
def fbp_phase(zeros, mults, theta):
    out = np.empty(theta.shape[0], dtype=np.float64)
    for i in range(theta.shape[0]):
        out[i] = _phase_scalar(zeros, mults, theta[i])
    return out


@njit(cache=True)
def circle_solve(zeros, mults, targets, n_bisect=64, n_newton=3):
    out = np.empty(targets.shape[0], dtype=np.float64)
    for j in range(targets.shape[0]):
        target = targets[j]
        lo = 0.0
        hi = TWO_PI
        for _ in range(n_bisect):
            mid = 0.5 * (lo + hi)
            if _phase_scalar(zeros, mults, mid) < target:
                lo = mid
            else:
                hi = mid
        theta = 0.5 * (lo + hi)
        for _ in range(n_newton):
            f = _phase_scalar(zeros, mults, theta) - target
            step = theta - f / _poisson_scalar(zeros, mults, theta)
            if lo <= step <= hi:
                theta = step
        out[j] = theta
    return out
