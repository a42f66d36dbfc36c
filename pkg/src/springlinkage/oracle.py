"""Virtual-work validator for the closed-form charging forces.

The oracle never touches the closed forms.  It places each spring on the
linkage through :func:`~springlinkage.geometry.attachment_point`, sums the
elastic energy ``U`` of all springs at a knee angle, and differentiates
``U`` numerically with respect to the body displacement ``y``.  With the
quasi-static, frictionless assumptions the charging force is ``dU/dy``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .geometry import (
    LinkageGeometry,
    StrokeConfig,
    attachment_point,
    body_displacement,
    joint_frame,
    knee_angle,
)
from .springs import SpringSpec

_JOINT_ANGLE_LINKS = {
    # joint: (link towards one neighbour, link towards the other)
    "A": ("B", "F"),
    "D": ("B", "F"),
    "B": ("A", "D"),
    "F": ("A", "D"),
}

_LINK_OF = {"BA", "BD", "AF", "FD"}


class OracleDisagreement(UserWarning):
    """Closed form and oracle differ by more than the requested tolerance."""


@dataclass(frozen=True)
class SpringInstance:
    """A spring placed on the linkage, with its natural state fixed at ``theta_ini``.

    Translational springs carry two ``(link_id, fraction)`` endpoints;
    rotational springs carry the joint whose interior angle they resist.
    Build instances with :meth:`translational` or :meth:`rotational` so
    the natural length/angle is derived from the standing posture.
    """

    kind: str
    stiffness: float
    natural: float
    endpoints: tuple = ()
    joint: str | None = None

    @classmethod
    def translational(cls, geom, cfg, end1, end2, stiffness):
        end1 = (str(end1[0]), float(end1[1]))
        end2 = (str(end2[0]), float(end2[1]))
        for link, _ in (end1, end2):
            if link not in _LINK_OF:
                raise ConfigurationError(f"unknown link {link!r}")
        if end1[0] == end2[0]:
            raise ConfigurationError(
                f"both spring ends lie on link {end1[0]}; a spring must join two different links")
        natural = _distance(joint_frame(geom, cfg.theta_ini), end1, end2)
        return cls("translational", float(stiffness), natural, (end1, end2))

    @classmethod
    def rotational(cls, cfg, joint, stiffness, geom=None):
        if joint not in _JOINT_ANGLE_LINKS:
            raise ConfigurationError(f"unknown joint {joint!r}")
        geom = geom or LinkageGeometry(1.0)
        natural = joint_angle(joint_frame(geom, cfg.theta_ini), joint)
        return cls("rotational", float(stiffness), natural, joint=joint)

    def energy(self, geom: LinkageGeometry, theta: float) -> float:
        frame = joint_frame(geom, theta)
        if self.kind == "rotational":
            dq = joint_angle(frame, self.joint) - self.natural
        else:
            dq = _distance(frame, *self.endpoints) - self.natural
        return 0.5 * self.stiffness * dq * dq


def _distance(frame, end1, end2) -> float:
    p = attachment_point(frame, *end1)
    q = attachment_point(frame, *end2)
    return float(math.hypot(q[0] - p[0], q[1] - p[1]))


def joint_angle(frame, joint: str) -> float:
    """Interior angle of the rhombus at ``joint``, from coordinates."""
    here = frame.joint(joint)
    u = frame.joint(_JOINT_ANGLE_LINKS[joint][0]) - here
    v = frame.joint(_JOINT_ANGLE_LINKS[joint][1]) - here
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u[0] * v[0] + u[1] * v[1])


def instances_for(spec: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig) -> list[SpringInstance]:
    """Place the spring(s) described by ``spec`` on the linkage.

    ``count`` identical springs are placed as ``count`` separate instances
    (alternating with the mirror image across B-F), so additivity is
    exercised rather than assumed.
    """
    g = spec.gamma
    if spec.kind == "rotational":
        joints = ["A", "D"]
        return [SpringInstance.rotational(cfg, joints[i % 2], spec.stiffness, geom)
                for i in range(spec.count)]
    if spec.kind == "vertical":
        ends = (("BA", 0.0), ("FD", 0.0)), (("BD", 0.0), ("AF", 1.0))
    elif spec.kind == "horizontal":
        ends = (("BA", 1.0), ("FD", 1.0)), (("BD", 1.0), ("AF", 0.0))
    elif spec.kind == "A":
        ends = (("BA", g), ("FD", g)), (("BD", g), ("AF", 1.0 - g))
    elif spec.kind == "B":
        # K2 sits at gamma from D on DB, i.e. 1 - gamma from B
        ends = (("BA", g), ("BD", 1.0 - g)), (("BD", g), ("BA", 1.0 - g))
    else:
        ends = (("BA", g), ("AF", g)), (("BD", g), ("FD", 1.0 - g))
    return [SpringInstance.translational(geom, cfg, *ends[i % 2], spec.stiffness)
            for i in range(spec.count)]


def potential_energy(geom: LinkageGeometry, springs, theta: float) -> float:
    """Total elastic energy of ``springs`` at knee angle ``theta``."""
    if not (0.0 <= theta <= math.pi):
        raise DomainError(f"knee angle must lie in [0, pi], got {theta!r}")
    return float(sum(s.energy(geom, theta) for s in springs))


def _y_range(geom, cfg):
    s = math.sin(cfg.theta_ini / 2.0)
    return geom.d * (s - 1.0), geom.d * s


def _central(geom, cfg, springs, y, h):
    y_min, y_max = _y_range(geom, cfg)
    if y - h < y_min or y + h > y_max:
        raise DomainError(
            f"finite-difference step {h:g} m leaves the knee-angle range [0, pi] around y = {y:g} m")
    up = potential_energy(geom, springs, knee_angle(geom, cfg, y + h))
    down = potential_energy(geom, springs, knee_angle(geom, cfg, y - h))
    return (up - down) / (2.0 * h)


def oracle_force(geom: LinkageGeometry, cfg: StrokeConfig, springs, theta: float,
                 step: float | None = None, richardson: bool = True) -> float:
    """Charging force ``dU/dy`` by central differences on the body displacement.

    ``step`` defaults to ``d * 1e-6``, shrunk to a hundredth of the distance
    to the nearer end of the knee-angle range when the point sits close to
    it (the angle is a square-root function of ``y`` at both ends).  An explicit ``step`` is used as given.  With ``richardson`` one
    level of Richardson extrapolation combines steps ``h`` and ``h/2``.
    """
    if not (cfg.theta_end < theta < cfg.theta_ini):
        raise DomainError("oracle angle must lie strictly inside the stroke")
    y = body_displacement(geom, cfg, theta)
    if step is None:
        y_min, y_max = _y_range(geom, cfg)
        h = min(geom.d * 1e-6, 0.01 * (y - y_min), 0.01 * (y_max - y))
    else:
        h = float(step)
    if not h > 0:
        raise DomainError(f"step must be positive, got {step!r}")
    coarse = _central(geom, cfg, springs, y, h)
    if not richardson:
        return coarse
    fine = _central(geom, cfg, springs, y, h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def oracle_profile(geom, cfg, springs, thetas, step=None, richardson=True) -> np.ndarray:
    return np.array([oracle_force(geom, cfg, springs, float(t), step, richardson) for t in thetas])


@dataclass(frozen=True)
class Comparison:
    """Closed form vs oracle over a set of knee angles."""

    thetas: np.ndarray
    closed_form: np.ndarray
    oracle: np.ndarray
    tolerance: float
    force_scale: float

    @property
    def relative_errors(self) -> np.ndarray:
        # forces below 1e-12 of the configuration's natural scale count as zero
        scale = np.maximum(np.abs(self.closed_form), np.abs(self.oracle))
        floor = 1e-12 * self.force_scale
        diff = np.abs(self.closed_form - self.oracle)
        with np.errstate(invalid="ignore"):
            rel = np.where(diff > floor, diff / np.maximum(scale, floor), 0.0)
        return np.where(np.isfinite(diff), rel, np.inf)

    @property
    def max_relative_error(self) -> float:
        return float(np.max(self.relative_errors, initial=0.0))

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tolerance


def force_scale(geom: LinkageGeometry, springs) -> float:
    """Natural force scale of a spring set: ``k d`` per translational, ``k_r / d`` per rotational spring."""
    return float(sum(s.stiffness * (geom.d if s.kind == "translational" else 1.0 / geom.d)
                     for s in springs))


def compare(closed_form_fn, geom, cfg, springs, thetas, tolerance=1e-6, step=None, warn=True) -> Comparison:
    """Evaluate ``closed_form_fn(thetas)`` against the oracle; warn on disagreement."""
    thetas = np.asarray(thetas, dtype=float)
    cf = np.asarray(closed_form_fn(thetas), dtype=float)
    orc = oracle_profile(geom, cfg, springs, thetas, step)
    result = Comparison(thetas, cf, orc, tolerance, force_scale(geom, springs))
    if warn and not result.passed:
        warnings.warn(
            f"closed form differs from the virtual-work oracle by "
            f"{result.max_relative_error:.3g} (tolerance {tolerance:g})",
            OracleDisagreement, stacklevel=2)
    return result


def interior_angles(cfg: StrokeConfig, n: int, margin: float = 1e-3) -> np.ndarray:
    """``n`` knee angles strictly inside the stroke, clear of both ends by ``margin`` rad."""
    return np.linspace(cfg.theta_ini - margin, cfg.theta_end + margin, n)
