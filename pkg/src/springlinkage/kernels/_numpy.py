"""Vectorised numpy kernels (reference path)."""

import numpy as np
from scipy.integrate import cumulative_trapezoid as _scipy_cumtrapz

MODEL_A, MODEL_B, MODEL_C = 0, 1, 2


def radicand(model, gamma, cos_theta):
    """(2 L_c / d)^2 for the three two-link attachment models."""
    if model == MODEL_A:
        return (1.0 - 2.0 * gamma) * (1.0 - 2.0 * gamma - 2.0 * cos_theta) + 1.0
    if model == MODEL_B:
        return 2.0 * gamma * (gamma - 1.0) * (1.0 - cos_theta) + 1.0
    return 2.0 * gamma * (gamma - 1.0) * (1.0 + cos_theta) + 1.0


def spring_axis(model, gamma, c, s):
    """Spring vector and reference link vector (both divided by L).

    Models A and C measure the angle between K1->K2 and B->A; model B
    measures it at K2, between K2->K1 and D->B.
    """
    if model == MODEL_A:
        u = (2.0 * gamma * c, -2.0 * (1.0 - gamma) * s)
        v = (-c, -s)
    elif model == MODEL_B:
        u = (-c, (1.0 - 2.0 * gamma) * s)
        v = (-c, s)
    else:
        u = ((2.0 * gamma - 1.0) * c, -s)
        v = (-c, -s)
    return u, v


def spring_angle(model, gamma, L, theta):
    """Spring-to-link angle with the inverse-sine branch fixed by the geometry.

    Returns ``(phi, phi_principal, phi_geometric)``.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    d = 2.0 * L
    lc = 0.5 * d * np.sqrt(radicand(model, gamma, np.cos(theta)))
    with np.errstate(divide="ignore", invalid="ignore"):
        if model == MODEL_A:
            arg = d * np.sin(theta) / (2.0 * lc)
        else:
            arg = gamma * L * np.sin(theta) / lc
        principal = np.arcsin(np.clip(arg, -1.0, 1.0))
    (ux, uy), (vx, vy) = spring_axis(model, gamma, c, s)
    ux = np.broadcast_to(ux, theta.shape).astype(float)
    uy = np.broadcast_to(uy, theta.shape).astype(float)
    # a collapsed spring (zero length) only occurs on the B-F axis
    collapsed = (ux == 0.0) & (uy == 0.0)
    uy = np.where(collapsed, -1.0, uy)
    geometric = np.arctan2(np.abs(ux * vy - uy * vx), ux * vx + uy * vy)
    flip = np.abs(geometric - principal) > np.abs(geometric - (np.pi - principal))
    phi = np.where(flip, np.pi - principal, principal)
    phi = np.where(np.isfinite(principal), phi, geometric)
    return phi, principal, geometric


def translational_force(model, gamma, k, L, theta_ini, theta, branch="geometric"):
    """Charging force of a two-link translational spring (models A, B, C).

    ``branch="principal"`` uses the bare inverse-sine value of ``phi``
    instead of the geometric branch; it exists for diagnostics only.
    """
    theta = np.asarray(theta, dtype=float)
    d = 2.0 * L
    half = theta / 2.0
    c = np.cos(half)
    s = np.sin(half)
    dlc = 0.5 * d * (np.sqrt(radicand(model, gamma, np.cos(theta_ini)))
                     - np.sqrt(radicand(model, gamma, np.cos(theta))))
    phi, principal, _ = spring_angle(model, gamma, L, theta)
    if branch == "principal":
        phi = principal
    elif branch != "geometric":
        raise ValueError(f"unknown branch {branch!r}")
    # k dL / sin(theta) * 2 sin(theta/2) == k dL / cos(theta/2)
    if model == MODEL_A:
        bracket = ((1.0 - gamma) * np.sin(half + phi) * c
                   + gamma * np.cos(half + phi) * s)
        return k * dlc * bracket / c
    if model == MODEL_B:
        bracket = ((2.0 * gamma - 1.0) * np.sin(phi - half) * c
                   - np.cos(phi - half) * s)
    else:
        bracket = (np.sin(phi + half) * c
                   + (2.0 * gamma - 1.0) * np.cos(phi + half) * s)
    return k * dlc * bracket / (2.0 * c)


def cumulative_trapezoid(f, x):
    """Running trapezoidal integral of ``f`` over ``x`` starting at zero."""
    return _scipy_cumtrapz(f, x, initial=0.0)
