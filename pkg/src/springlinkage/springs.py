"""Closed-form charging forces and stored energies of spring-linkages.

Every force function takes the knee angle ``theta`` in radians (scalar or
array) and returns the quasi-static force that must be applied at the body
to hold the linkage at that angle.  Springs are at their natural length in
the standing posture, so every force vanishes at ``theta_ini``.

Translational attachments
-------------------------
* model A: K1 on BA at ``gamma`` from B, K2 on FD at ``gamma`` from F.
  ``gamma = 0`` is the vertical spring (B-F), ``gamma = 1`` the horizontal
  one (A-D).
* model B: K1 on BA at ``gamma`` from B, K2 on DB at ``gamma`` from D.
* model C: K1 on BA at ``gamma`` from B, K2 on AF at ``gamma`` from A.

The spring-to-link angle ``phi`` enters the model formulas through an
inverse sine, which is two-valued on [0, pi].  The branch is taken from the
attachment-point geometry (see :func:`springlinkage.kernels.spring_angle`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError, SingularityError
from .geometry import LinkageGeometry, StrokeConfig

TRANSLATIONAL_MODELS = ("A", "B", "C")
KINDS = ("A", "B", "C", "vertical", "horizontal", "rotational")

# Start angle used in place of a fully upright posture for formulas that are
# singular at theta = pi.
UPRIGHT_START = math.radians(179.9)

_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class SpringSpec:
    """One spring (or ``count`` identical springs) attached to the linkage.

    ``stiffness`` is N/m for translational kinds and N m/rad for
    ``rotational``.  ``gamma`` is only meaningful for models A, B and C.
    """

    kind: str
    stiffness: float = 1.0
    gamma: float | None = None
    count: int = 1

    def __post_init__(self):
        kind = normalise_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in TRANSLATIONAL_MODELS:
            if self.gamma is None:
                raise ConfigurationError(f"model {kind} needs a positioning ratio gamma")
            if not (0.0 <= self.gamma <= 1.0):
                raise DomainError(f"gamma must lie in [0, 1], got {self.gamma!r}")
        elif self.gamma is not None:
            raise ConfigurationError(f"{kind} springs take no positioning ratio")
        if not (self.stiffness > 0 and math.isfinite(self.stiffness)):
            raise DomainError(f"stiffness must be positive, got {self.stiffness!r}")
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"spring count must be a positive integer, got {self.count!r}")

    @property
    def rotational(self) -> bool:
        return self.kind == "rotational"

    @property
    def effective_stiffness(self) -> float:
        """Stiffness of the single spring equivalent to ``count`` parallel ones."""
        return self.count * self.stiffness

    @property
    def singular_upright(self) -> bool:
        """True when the closed form cannot be evaluated at theta = pi."""
        return self.kind != "vertical"

    def with_stiffness(self, stiffness: float) -> "SpringSpec":
        return replace(self, stiffness=stiffness)

    def label(self) -> str:
        if self.kind in TRANSLATIONAL_MODELS:
            return f"model {self.kind} (gamma={self.gamma:g})"
        return self.kind


_KIND_ALIASES = {
    "a": "A", "b": "B", "c": "C",
    "model_a": "A", "model_b": "B", "model_c": "C",
    "vertical": "vertical", "v": "vertical",
    "horizontal": "horizontal", "h": "horizontal",
    "rotational": "rotational", "r": "rotational", "torsion": "rotational",
}


def normalise_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[str(kind).strip().lower()]
    except KeyError:
        raise ConfigurationError(f"unknown spring kind {kind!r}; expected one of {KINDS}") from None


@dataclass(frozen=True)
class SpringState:
    """Spring length, deflection and forces at one knee angle.

    For rotational springs ``length`` is the knee angle, ``deflection`` is
    ``theta_ini - theta`` and ``restoring`` is a torque.
    """

    theta: float
    length: float
    deflection: float
    phi: float
    charging_force: float
    restoring: float

    @property
    def extending(self) -> bool:
        """True for a spring that lengthens during compression (negative deflection)."""
        return self.deflection < 0


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _guard_singular(theta: np.ndarray, what: str) -> None:
    hit = theta >= math.pi - _SINGULAR_TOL
    if np.any(hit):
        raise SingularityError(
            f"{what} is singular at knee angle 180 deg (theta = pi); "
            f"start the stroke at {math.degrees(UPRIGHT_START):g} deg instead",
            angle=math.pi,
        )


def charging_force_vertical(geom: LinkageGeometry, cfg: StrokeConfig, k: float, theta):
    """Vertical spring between B and F: ``F = k d (sin(ti/2) - sin(t/2))``."""
    th = cfg.check(theta)
    return _scalar_or_array(k * geom.d * (math.sin(cfg.theta_ini / 2.0) - np.sin(th / 2.0)))


def charging_force_horizontal(geom: LinkageGeometry, cfg: StrokeConfig, k: float, theta):
    """Horizontal spring between the knees: ``F = k d tan(t/2) (cos(t/2) - cos(ti/2))``."""
    if cfg.theta_ini >= math.pi - _SINGULAR_TOL:
        raise SingularityError(
            "horizontal spring cannot be charged from theta_ini = 180 deg", angle=math.pi)
    th = cfg.check(theta)
    half = th / 2.0
    return _scalar_or_array(
        k * geom.d * np.tan(half) * (np.cos(half) - math.cos(cfg.theta_ini / 2.0)))


def charging_force_rotational(geom: LinkageGeometry, cfg: StrokeConfig, k_r: float, theta):
    """Rotational spring at a knee: ``F = 2 k_r (ti - t) / (d cos(t/2))``.

    ``k_r`` is the total stiffness referred to the knee angle; springs at B or
    F, or several springs, reduce to this by summing their stiffnesses.
    """
    th = cfg.check(theta)
    _guard_singular(th, "rotational-spring charging force")
    return _scalar_or_array(2.0 * k_r * (cfg.theta_ini - th) / (geom.d * np.cos(th / 2.0)))


def _model_force(code, name, geom, cfg, gamma, k, theta):
    if not (0.0 <= gamma <= 1.0):
        raise DomainError(f"gamma must lie in [0, 1], got {gamma!r}")
    th = cfg.check(theta)
    _guard_singular(th, f"model {name} charging force")
    out = kernels.translational_force(code, gamma, k, geom.link_length, cfg.theta_ini, th)
    return float(out[0]) if th.ndim == 0 else out.reshape(th.shape)


def charging_force_model_a(geom: LinkageGeometry, cfg: StrokeConfig, gamma: float, k: float, theta):
    """Spring joining links BA and FD at positioning ratio ``gamma``."""
    return _model_force(kernels.MODEL_A, "A", geom, cfg, gamma, k, theta)


def charging_force_model_a_principal(geom: LinkageGeometry, cfg: StrokeConfig, gamma: float, k: float, theta):
    """Model A force evaluated on the principal inverse-sine branch of ``phi``.

    Differs from :func:`charging_force_model_a` wherever ``sin(t/2)**2 < gamma``;
    kept to report how much the branch choice matters.
    """
    if not (0.0 <= gamma <= 1.0):
        raise DomainError(f"gamma must lie in [0, 1], got {gamma!r}")
    th = cfg.check(theta)
    _guard_singular(th, "model A charging force")
    out = kernels.principal_branch_force(kernels.MODEL_A, gamma, k, geom.link_length, cfg.theta_ini, th)
    return float(out[0]) if th.ndim == 0 else out.reshape(th.shape)


def charging_force_model_b(geom: LinkageGeometry, cfg: StrokeConfig, gamma: float, k: float, theta):
    """Spring joining links BA and DB at positioning ratio ``gamma``.

    The bracket multiplying ``k dL / sin(theta)`` is
    ``sin(t/2) [(2g - 1) sin(phi - t/2) cos(t/2) - cos(phi - t/2) sin(t/2)]``
    with ``phi`` the spring angle at K2, measured against link DB.  This is
    the form that matches ``dU/dy`` of the spring energy.
    """
    return _model_force(kernels.MODEL_B, "B", geom, cfg, gamma, k, theta)


def charging_force_model_c(geom: LinkageGeometry, cfg: StrokeConfig, gamma: float, k: float, theta):
    """Spring joining links BA and AF at positioning ratio ``gamma``."""
    return _model_force(kernels.MODEL_C, "C", geom, cfg, gamma, k, theta)


def peak_force_angle_horizontal(theta_ini: float) -> float:
    """Knee angle of the horizontal spring's peak charging force, ``2 acos(cos(ti/2)^(1/3))``."""
    if not (0.0 < theta_ini < math.pi):
        raise DomainError(f"theta_ini must lie in (0, pi), got {theta_ini!r}")
    return 2.0 * math.acos(math.cos(theta_ini / 2.0) ** (1.0 / 3.0))


def _check_end(cfg: StrokeConfig, theta: float) -> float:
    if not (0.0 <= theta <= cfg.theta_ini):
        raise DomainError(
            f"end angle {math.degrees(theta):.6g} deg outside [0, {math.degrees(cfg.theta_ini):.6g}] deg")
    return theta


def epe_vertical(cfg: StrokeConfig, f_max: float, d: float, theta: float | None = None) -> float:
    """Energy stored by a vertical spring sized so its force reaches ``f_max`` at ``theta``."""
    theta = _check_end(cfg, cfg.theta_end if theta is None else theta)
    return 0.5 * f_max * d * (math.sin(cfg.theta_ini / 2.0) - math.sin(theta / 2.0))


def epe_horizontal(cfg: StrokeConfig, f_max: float, d: float, theta_end: float | None = None) -> float:
    """Energy stored by a horizontal spring whose peak force equals ``f_max``.

    When the stroke runs past the peak-force angle the stiffness is set by
    the peak, otherwise by the force at the end of the stroke.
    """
    theta_end = _check_end(cfg, cfg.theta_end if theta_end is None else theta_end)
    if cfg.theta_ini >= math.pi - _SINGULAR_TOL:
        raise SingularityError("horizontal spring cannot start from 180 deg", angle=math.pi)
    ci = math.cos(cfg.theta_ini / 2.0)
    ce = math.cos(theta_end / 2.0)
    if theta_end == cfg.theta_ini:
        return 0.0
    peak = peak_force_angle_horizontal(cfg.theta_ini)
    if theta_end <= peak:
        cp = math.cos(peak / 2.0)
        return f_max * d * (ce - ci) ** 2 / (2.0 * math.tan(peak / 2.0) * (cp - ci))
    return f_max * d * (ce - ci) / (2.0 * math.tan(theta_end / 2.0))


def epe_rotational(cfg: StrokeConfig, f_max: float, d: float) -> float:
    """Energy of a knee rotational spring whose force reaches ``f_max`` at ``theta_end``."""
    return 0.25 * f_max * d * (cfg.theta_ini - cfg.theta_end) * math.cos(cfg.theta_end / 2.0)


def spring_length(kind: str, gamma: float | None, geom: LinkageGeometry, theta):
    """Current spring length for the translational kinds."""
    kind = normalise_kind(kind)
    th = np.asarray(theta, dtype=float)
    if kind == "vertical":
        out = geom.d * np.sin(th / 2.0)
    elif kind == "horizontal":
        out = geom.d * np.cos(th / 2.0)
    elif kind in TRANSLATIONAL_MODELS:
        code = kernels.MODEL_CODES[kind]
        out = 0.5 * geom.d * np.sqrt(kernels.radicand(code, gamma, np.cos(th)))
    else:
        raise ConfigurationError("rotational springs have no length")
    return _scalar_or_array(out)


def spring_deflection(kind: str, gamma: float | None, geom: LinkageGeometry, cfg: StrokeConfig, theta):
    """``L_c,ini - L_c``: positive while the spring shortens, negative while it extends."""
    th = cfg.check(theta)
    return _scalar_or_array(
        spring_length(kind, gamma, geom, cfg.theta_ini) - spring_length(kind, gamma, geom, th))


def charging_force(spec: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig, theta):
    """Dispatch to the closed form for ``spec`` using its effective stiffness."""
    k = spec.effective_stiffness
    if spec.kind == "vertical":
        return charging_force_vertical(geom, cfg, k, theta)
    if spec.kind == "horizontal":
        return charging_force_horizontal(geom, cfg, k, theta)
    if spec.kind == "rotational":
        return charging_force_rotational(geom, cfg, k, theta)
    fn = {"A": charging_force_model_a, "B": charging_force_model_b, "C": charging_force_model_c}[spec.kind]
    return fn(geom, cfg, spec.gamma, k, theta)


def spring_state(spec: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig, theta: float) -> SpringState:
    theta = float(cfg.check(theta))
    force = float(charging_force(spec, geom, cfg, theta))
    k = spec.effective_stiffness
    if spec.rotational:
        dq = cfg.theta_ini - theta
        return SpringState(theta, theta, dq, math.nan, force, k * dq)
    length = float(spring_length(spec.kind, spec.gamma, geom, theta))
    dl = float(spring_deflection(spec.kind, spec.gamma, geom, cfg, theta))
    if spec.kind in TRANSLATIONAL_MODELS:
        code = kernels.MODEL_CODES[spec.kind]
        phi = float(kernels.spring_angle(code, spec.gamma, geom.link_length, np.array([theta]))[0][0])
    elif spec.kind == "vertical":
        phi = math.pi / 2.0 - theta / 2.0
    else:
        phi = theta / 2.0
    return SpringState(theta, length, dl, phi, force, k * abs(dl))
