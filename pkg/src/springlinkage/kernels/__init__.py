"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly.  Setting the environment
variable ``SPRINGLINKAGE_DISABLE_NUMBA`` to a non-empty value other than
``0`` forces the numpy path; it is read once at import time.
"""

import os

import numpy as np

from . import _numpy

MODEL_A, MODEL_B, MODEL_C = _numpy.MODEL_A, _numpy.MODEL_B, _numpy.MODEL_C
MODEL_CODES = {"A": MODEL_A, "B": MODEL_B, "C": MODEL_C}

_disabled = os.environ.get("SPRINGLINKAGE_DISABLE_NUMBA", "").strip() not in ("", "0")

_jit = None
if not _disabled:
    try:
        from . import _numba as _jit
    except ImportError:  # pragma: no cover - numba missing from the environment
        _jit = None

BACKEND = "numba" if _jit is not None else "numpy"

spring_angle = _numpy.spring_angle
radicand = _numpy.radicand


def translational_force(model, gamma, k, L, theta_ini, theta):
    theta = np.ascontiguousarray(np.atleast_1d(theta), dtype=float)
    if _jit is not None:
        return _jit.translational_force(int(model), float(gamma), float(k),
                                          float(L), float(theta_ini), theta)
    return _numpy.translational_force(model, gamma, k, L, theta_ini, theta)


def principal_branch_force(model, gamma, k, L, theta_ini, theta):
    """Numpy-only diagnostic: model force with ``phi`` on the principal branch."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    return _numpy.translational_force(model, gamma, k, L, theta_ini, theta, branch="principal")


def cumulative_trapezoid(f, x):
    f = np.ascontiguousarray(f, dtype=float)
    x = np.ascontiguousarray(x, dtype=float)
    if _jit is not None:
        return _jit.cumulative_trapezoid(f, x)
    return _numpy.cumulative_trapezoid(f, x)


def implementations():
    """Mapping of backend name to kernel module, for benchmarks and cross-checks."""
    impls = {"numpy": _numpy}
    if _jit is not None:
        impls["numba"] = _jit
    return impls
