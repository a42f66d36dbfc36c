"""Planar geometry of the symmetric rhomboidal four-bar linkage.

Coordinate convention: the foot joint F sits at the origin and the body
joint B moves along the +y axis.  Knee A is on the left (x < 0), knee D on
the right.  All four links have the same length ``L`` and the knee angle
``theta`` is the interior angle at A (equal to the one at D).

    B = (0, d sin(theta/2))
    A = (-L cos(theta/2), L sin(theta/2))
    D = (+L cos(theta/2), L sin(theta/2))
    F = (0, 0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Link ids, named by (first joint, second joint).  Fractions along a link are
# measured from its first-named joint.
LINKS = {
    "BA": ("B", "A"),
    "BD": ("B", "D"),
    "AF": ("A", "F"),
    "FD": ("F", "D"),
}

# Aliases accepted for convenience (reverse orientation flips the fraction).
_REVERSED = {"AB": "BA", "DB": "BD", "FA": "AF", "DF": "FD"}

_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class LinkageGeometry:
    """Link length of a rhomboidal linkage; ``d = 2 L`` is derived."""

    link_length: float

    def __post_init__(self):
        if not (self.link_length > 0 and math.isfinite(self.link_length)):
            raise DomainError(f"link length must be positive, got {self.link_length!r}")

    @property
    def characteristic_length(self) -> float:
        return 2.0 * self.link_length

    # short aliases used throughout the numerics
    @property
    def L(self) -> float:
        return self.link_length

    @property
    def d(self) -> float:
        return self.characteristic_length

    @classmethod
    def from_characteristic_length(cls, d: float) -> "LinkageGeometry":
        return cls(d / 2.0)


@dataclass(frozen=True)
class StrokeConfig:
    """Compression stroke from the standing angle down to the charged angle (radians)."""

    theta_ini: float
    theta_end: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.theta_ini <= math.pi):
            raise DomainError(f"theta_ini must lie in (0, pi], got {self.theta_ini!r}")
        if not (0.0 <= self.theta_end < self.theta_ini):
            raise DomainError(
                f"theta_end must lie in [0, theta_ini), got {self.theta_end!r} "
                f"with theta_ini={self.theta_ini!r}"
            )

    @classmethod
    def from_degrees(cls, theta_ini: float, theta_end: float = 0.0) -> "StrokeConfig":
        return cls(math.radians(theta_ini), math.radians(theta_end))

    def with_start(self, theta_ini: float) -> "StrokeConfig":
        return StrokeConfig(theta_ini, self.theta_end)

    def angles(self, n_points: int) -> np.ndarray:
        """Uniform knee-angle samples ordered from ``theta_ini`` down to ``theta_end``."""
        if n_points < 2:
            raise DomainError(f"need at least 2 samples, got {n_points}")
        return np.linspace(self.theta_ini, self.theta_end, n_points)

    def check(self, theta) -> np.ndarray:
        """Return ``theta`` as an array, raising if any angle leaves the stroke."""
        th = np.asarray(theta, dtype=float)
        lo = self.theta_end - _ANGLE_TOL
        hi = self.theta_ini + _ANGLE_TOL
        if np.any(~np.isfinite(th)) or np.any(th < lo) or np.any(th > hi):
            bad = th[(th < lo) | (th > hi) | ~np.isfinite(th)].ravel()[0]
            raise DomainError(
                f"knee angle {math.degrees(bad):.6g} deg lies outside the stroke "
                f"[{math.degrees(self.theta_end):.6g}, {math.degrees(self.theta_ini):.6g}] deg"
            )
        return th


@dataclass(frozen=True)
class JointFrame:
    """Joint coordinates of the linkage at one knee angle."""

    theta: float
    B: np.ndarray
    A: np.ndarray
    D: np.ndarray
    F: np.ndarray

    def joint(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def link_length(self, link_id: str) -> float:
        p, q = LINKS[link_id]
        return float(np.hypot(*(self.joint(q) - self.joint(p))))

    @property
    def body_height(self) -> float:
        """|BF|, the body-foot separation."""
        return float(np.hypot(*(self.B - self.F)))


def _check_angle(theta: float) -> None:
    if not (-_ANGLE_TOL <= theta <= math.pi + _ANGLE_TOL):
        raise DomainError(f"knee angle must lie in [0, pi], got {theta!r}")


def joint_frame(geom: LinkageGeometry, theta: float) -> JointFrame:
    """Coordinates of B, A, D and F at knee angle ``theta`` (radians)."""
    _check_angle(theta)
    L = geom.link_length
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return JointFrame(
        theta=float(theta),
        B=np.array([0.0, 2.0 * L * s]),
        A=np.array([-L * c, L * s]),
        D=np.array([L * c, L * s]),
        F=np.array([0.0, 0.0]),
    )


def attachment_point(frame: JointFrame, link_id: str, fraction: float) -> np.ndarray:
    """Point at ``fraction`` of the way along ``link_id`` from its first-named joint."""
    if not (0.0 <= fraction <= 1.0):
        raise DomainError(f"attachment fraction must lie in [0, 1], got {fraction!r}")
    if link_id in _REVERSED:
        link_id, fraction = _REVERSED[link_id], 1.0 - fraction
    try:
        p, q = LINKS[link_id]
    except KeyError:
        raise DomainError(f"unknown link {link_id!r}; expected one of {sorted(LINKS)}") from None
    P, Q = frame.joint(p), frame.joint(q)
    return P + fraction * (Q - P)


def body_displacement(geom: LinkageGeometry, cfg: StrokeConfig, theta):
    """Displacement of the body from the standing posture, ``d (sin(ti/2) - sin(t/2))``.

    Accepts a scalar or an array of knee angles inside the stroke.
    """
    th = cfg.check(theta)
    y = geom.d * (math.sin(cfg.theta_ini / 2.0) - np.sin(th / 2.0))
    return float(y) if y.ndim == 0 else y


def knee_angle(geom: LinkageGeometry, cfg: StrokeConfig, y):
    """Inverse of :func:`body_displacement` over the whole closed range [0, pi].

    The stroke's ``theta_end`` is deliberately not enforced here, so the
    finite-difference oracle can probe slightly past the stroke ends.
    """
    arg = math.sin(cfg.theta_ini / 2.0) - np.asarray(y, dtype=float) / geom.d
    if np.any(arg < -_ANGLE_TOL) or np.any(arg > 1.0 + _ANGLE_TOL):
        raise DomainError("body displacement maps outside the knee-angle range [0, pi]")
    th = 2.0 * np.arcsin(np.clip(arg, 0.0, 1.0))
    return float(th) if th.ndim == 0 else th
