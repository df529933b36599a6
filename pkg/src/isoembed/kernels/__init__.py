"""Kernel dispatch.

The numba implementations are used unless ``ISOEMBED_DISABLE_NUMBA`` is set to
a truthy value or numba cannot be imported; then the vectorised numpy path
runs instead. Both take the same arguments and agree to rounding.
"""
import os

import numpy as np

from . import _numpy

_disabled = os.environ.get("ISOEMBED_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

if _disabled:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover
        _impl = _numpy
        BACKEND = "numpy"


def _flat(z, dtype):
    z = np.asarray(z, dtype=dtype)
    return z.reshape(-1), z.shape


def fbp_eval(zeros, mults, consts, gamma, z):
    flat, shape = _flat(z, np.complex128)
    return _impl.fbp_eval(zeros, mults, consts, complex(gamma), np.ascontiguousarray(flat)).reshape(shape)


def fbp_poisson(zeros, mults, t):
    flat, shape = _flat(t, np.complex128)
    return _impl.fbp_poisson(zeros, mults, np.ascontiguousarray(flat)).reshape(shape)


def fbp_logderiv(zeros, mults, z):
    flat, shape = _flat(z, np.complex128)
    return _impl.fbp_logderiv(zeros, mults, np.ascontiguousarray(flat)).reshape(shape)


def fbp_phase(zeros, mults, theta):
    flat, shape = _flat(theta, np.float64)
    return _impl.fbp_phase(zeros, mults, np.ascontiguousarray(flat)).reshape(shape)


def circle_solve(zeros, mults, targets):
    flat, shape = _flat(targets, np.float64)
    return _impl.circle_solve(zeros, mults, np.ascontiguousarray(flat)).reshape(shape)


__all__ = ["BACKEND", "fbp_eval", "fbp_poisson", "fbp_logderiv", "fbp_phase", "circle_solve"]
