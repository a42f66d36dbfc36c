"""numba-compiled kernels; same contracts as :mod:`._numpy`."""

import math

import numpy as np
from numba import njit

MODEL_A, MODEL_B, MODEL_C = 0, 1, 2


@njit(cache=True)
def _radicand(model, gamma, cos_theta):
    if model == MODEL_A:
        return (1.0 - 2.0 * gamma) * (1.0 - 2.0 * gamma - 2.0 * cos_theta) + 1.0
    if model == MODEL_B:
        return 2.0 * gamma * (gamma - 1.0) * (1.0 - cos_theta) + 1.0
    return 2.0 * gamma * (gamma - 1.0) * (1.0 + cos_theta) + 1.0


@njit(cache=True)
def _phi(model, gamma, L, theta, c, s, lc):
    d = 2.0 * L
    if model == MODEL_A:
        ux = 2.0 * gamma * c
        uy = -2.0 * (1.0 - gamma) * s
        vx = -c
        vy = -s
    elif model == MODEL_B:
        ux = -c
        uy = (1.0 - 2.0 * gamma) * s
        vx = -c
        vy = s
    else:
        ux = (2.0 * gamma - 1.0) * c
        uy = -s
        vx = -c
        vy = -s
    if ux == 0.0 and uy == 0.0:
        uy = -1.0
    geometric = math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)
    if lc == 0.0:
        return geometric
    if model == MODEL_A:
        arg = d * math.sin(theta) / (2.0 * lc)
    else:
        arg = gamma * L * math.sin(theta) / lc
    arg = min(1.0, max(-1.0, arg))
    principal = math.asin(arg)
    if abs(geometric - principal) > abs(geometric - (math.pi - principal)):
        return math.pi - principal
    return principal


@njit(cache=True)
def translational_force(model, gamma, k, L, theta_ini, theta):
    d = 2.0 * L
    lc_ini = 0.5 * d * math.sqrt(_radicand(model, gamma, math.cos(theta_ini)))
    out = np.empty(theta.shape[0])
    for i in range(theta.shape[0]):
        t = theta[i]
        half = 0.5 * t
        c = math.cos(half)
        s = math.sin(half)
        lc = 0.5 * d * math.sqrt(_radicand(model, gamma, math.cos(t)))
        dlc = lc_ini - lc
        phi = _phi(model, gamma, L, t, c, s, lc)
        if model == MODEL_A:
            bracket = ((1.0 - gamma) * math.sin(half + phi) * c
                       + gamma * math.cos(half + phi) * s)
            out[i] = k * dlc * bracket / c
        elif model == MODEL_B:
            bracket = ((2.0 * gamma - 1.0) * math.sin(phi - half) * c
                       - math.cos(phi - half) * s)
            out[i] = k * dlc * bracket / (2.0 * c)
        else:
            bracket = (math.sin(phi + half) * c
                       + (2.0 * gamma - 1.0) * math.cos(phi + half) * s)
            out[i] = k * dlc * bracket / (2.0 * c)
    return out


@njit(cache=True)
def cumulative_trapezoid(f, x):
    out = np.empty(f.shape[0])
    out[0] = 0.0
    acc = 0.0
    for i in range(1, f.shape[0]):
        acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1])
        out[i] = acc
    return out
