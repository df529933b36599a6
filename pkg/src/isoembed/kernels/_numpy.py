"""Vectorised numpy versions of the hot Blaschke-product kernels.

Every function mirrors the loop version in ``_numba`` argument for argument.
Zeros are passed with multiplicities: ``zeros`` (complex), ``mults`` (int),
``consts`` are the unimodular per-factor constants.
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def fbp_eval(zeros, mults, consts, gamma, z):
    z = np.asarray(z, dtype=np.complex128)
    out = np.full(z.shape, gamma, dtype=np.complex128)
    for zk, rk, ck in zip(zeros, mults, consts):
        out *= (ck * (zk - z) / (1.0 - np.conj(zk) * z)) ** rk
    return out


def fbp_poisson(zeros, mults, t):
    """Sum of r_k (1-|z_k|^2)/|t-z_k|^2, i.e. t B'(t)/B(t) on the circle."""
    t = np.asarray(t, dtype=np.complex128)
    out = np.zeros(t.shape, dtype=np.float64)
    for zk, rk in zip(zeros, mults):
        out += rk * (1.0 - abs(zk) ** 2) / np.abs(t - zk) ** 2
    return out


def fbp_logderiv(zeros, mults, z):
    """z B'(z)/B(z) at arbitrary points away from zeros and poles."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros(z.shape, dtype=np.complex128)
    for zk, rk in zip(zeros, mults):
        out += rk * (1.0 - abs(zk) ** 2) / ((1.0 - np.conj(zk) * z) * (z - zk))
    return z * out


def fbp_phase(zeros, mults, theta):
    """Continuous phase of prod ((t - z_k)/(1 - conj(z_k) t))^r_k at t = e^{i theta}.

    Uses (t - a)/(1 - conj(a) t) = t (1 - a/t) / conj(1 - a/t); the real part
    of 1 - a/t is positive, so the principal argument never wraps.
    """
    theta = np.asarray(theta, dtype=np.float64)
    out = np.zeros(theta.shape, dtype=np.float64)
    e = np.exp(-1j * theta)
    for zk, rk in zip(zeros, mults):
        out += rk * (theta + 2.0 * np.angle(1.0 - zk * e))
    return out


def circle_solve(zeros, mults, targets, n_bisect=64, n_newton=3):
    """Solve phase(theta) = target for each target, theta in [0, 2 pi).

    The phase is strictly increasing with derivative fbp_poisson, so every
    target in [phase(0), phase(0) + 2 pi N) has exactly one solution.
    """
    targets = np.asarray(targets, dtype=np.float64)
    lo = np.zeros(targets.shape)
    hi = np.full(targets.shape, TWO_PI)
    for _ in range(n_bisect):
        mid = 0.5 * (lo + hi)
        below = fbp_phase(zeros, mults, mid) < targets
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    theta = 0.5 * (lo + hi)
    for _ in range(n_newton):
        f = fbp_phase(zeros, mults, theta) - targets
        d = fbp_poisson(zeros, mults, np.exp(1j * theta))
        step = theta - f / d
        # keep Newton inside the final bracket
        theta = np.where((step >= lo) & (step <= hi), step, theta)
    return theta
