"""Charging profiles, stiffness sizing, superposition and design sweeps.

Energies are obtained by trapezoidal integration of the charging force over
the body displacement, sampled uniformly in knee angle between the
standing and charged angles (1000 samples by default).  Results are
normalised against the ideal constant-force spring, which stores
``F_max * d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .errors import DomainError, SingularityError, UnsolvableError
from .geometry import LinkageGeometry, StrokeConfig, body_displacement
from .springs import UPRIGHT_START, SpringSpec, charging_force, normalise_kind

DEFAULT_POINTS = 1000


@dataclass(frozen=True)
class ChargingProfile:
    """Sampled compression stroke, ordered from ``theta_ini`` down to ``theta_end``."""

    theta: np.ndarray
    y: np.ndarray
    force: np.ndarray
    epe: np.ndarray
    f_max: float
    d: float

    @property
    def energy(self) -> float:
        return float(self.epe[-1])

    @property
    def normalized_energy(self) -> float:
        """Stored energy as a fraction of the ideal spring's ``F_max d``."""
        return self.energy / (self.f_max * self.d)

    @property
    def peak_force(self) -> float:
        return float(np.max(self.force))

    @property
    def peak_angle(self) -> float:
        return float(self.theta[int(np.argmax(self.force))])

    def __len__(self):
        return len(self.theta)


def effective_stroke(spec: SpringSpec, cfg: StrokeConfig) -> StrokeConfig:
    """Move the start off 180 deg for closed forms that are singular there."""
    if spec.singular_upright and cfg.theta_ini > UPRIGHT_START:
        return cfg.with_start(UPRIGHT_START)
    return cfg


def integrate_profile(force_fn, geom: LinkageGeometry, cfg: StrokeConfig,
                      n_points: int = DEFAULT_POINTS, f_max: float | None = None) -> ChargingProfile:
    """Sample ``force_fn`` over the stroke and accumulate the stored energy.

    ``force_fn`` maps an array of knee angles to charging forces.  ``f_max``
    defaults to the largest sampled force.
    """
    theta = cfg.angles(n_points)
    y = body_displacement(geom, cfg, theta)
    force = np.asarray(force_fn(theta), dtype=float)
    if force.shape != theta.shape:
        force = np.broadcast_to(force, theta.shape).astype(float)
    if not np.all(np.isfinite(force)):
        bad = theta[~np.isfinite(force)][0]
        raise SingularityError(f"charging force is not finite at {math.degrees(bad):.6g} deg", angle=bad)
    epe = kernels.cumulative_trapezoid(force, y)
    if f_max is None:
        f_max = float(np.max(force))
    return ChargingProfile(theta, y, force, epe, float(f_max), geom.d)


def natural_force_scale(spec: SpringSpec, geom: LinkageGeometry) -> float:
    """Force produced by unit deflection scale: ``k d`` or ``k_r / d``."""
    k = spec.effective_stiffness
    return k / geom.d if spec.rotational else k * geom.d


def _refined_peak(spec, geom, cfg, theta, force) -> float:
    i = int(np.argmax(force))
    lo = theta[min(i + 1, len(theta) - 1)]
    hi = theta[max(i - 1, 0)]
    best = float(force[i])
    if hi - lo <= 0:
        return best
    res = minimize_scalar(lambda t: -float(charging_force(spec, geom, cfg, t)),
                          bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return max(best, -float(res.fun))


def solve_stiffness(spec: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig, f_max: float,
                    n_points: int = DEFAULT_POINTS) -> float:
    """Per-spring stiffness whose peak charging force over the stroke equals ``f_max``.

    The force is linear in stiffness, so the answer is ``f_max`` divided by
    the peak of the unit-stiffness profile.  The grid peak is refined with a
    bounded scalar search between its neighbours, keeping every sampled
    force at or below ``f_max``.
    """
    if not f_max > 0:
        raise DomainError(f"F_max must be positive, got {f_max!r}")
    cfg = effective_stroke(spec, cfg)
    unit = spec.with_stiffness(1.0)
    theta = cfg.angles(n_points)
    force = np.asarray(charging_force(unit, geom, cfg, theta))
    peak = _refined_peak(unit, geom, cfg, theta, force)
    if not math.isfinite(peak) or peak <= 1e-12 * natural_force_scale(unit, geom):
        raise UnsolvableError(
            f"{spec.label()} produces no charging force over the stroke; no stiffness reaches F_max")
    return f_max / peak


def charge(spec: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig, f_max: float,
           n_points: int = DEFAULT_POINTS) -> tuple[SpringSpec, ChargingProfile]:
    """Size ``spec`` for ``f_max`` and return the sized spring with its profile."""
    sized = spec.with_stiffness(solve_stiffness(spec, geom, cfg, f_max, n_points))
    run = effective_stroke(spec, cfg)
    profile = integrate_profile(lambda th: charging_force(sized, geom, run, th), geom, run, n_points, f_max)
    return sized, profile


def profile_for(spec: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig,
                n_points: int = DEFAULT_POINTS, f_max: float | None = None) -> ChargingProfile:
    """Profile of ``spec`` at its own stiffness."""
    run = effective_stroke(spec, cfg)
    return integrate_profile(lambda th: charging_force(spec, geom, run, th), geom, run, n_points, f_max)


def normalized_stiffness(spec: SpringSpec, geom: LinkageGeometry, f_max: float) -> float:
    """``k d / F_max`` for translational springs, ``k_r / (F_max d)`` for rotational ones."""
    if spec.rotational:
        return spec.stiffness / (f_max * geom.d)
    return spec.stiffness * geom.d / f_max


# -- superposition -----------------------------------------------------------


@dataclass(frozen=True)
class CompositeSpring:
    """Several springs acting together on one linkage."""

    components: tuple
    label: str = ""

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise DomainError("a composite spring needs at least one component")
        object.__setattr__(self, "components", comps)
        if not self.label:
            object.__setattr__(self, "label", " + ".join(c.label() for c in comps))

    @property
    def singular_upright(self) -> bool:
        return any(c.singular_upright for c in self.components)

    def scaled(self, factor: float) -> "CompositeSpring":
        return CompositeSpring(tuple(c.with_stiffness(c.stiffness * factor) for c in self.components),
                               self.label)


def superpose(composite: CompositeSpring, geom: LinkageGeometry, cfg: StrokeConfig, theta):
    """Pointwise sum of the components' charging forces."""
    total = None
    for comp in composite.components:
        f = charging_force(comp, geom, cfg, theta)
        total = f if total is None else total + f
    return total


def composite_stroke(composite: CompositeSpring, cfg: StrokeConfig) -> StrokeConfig:
    if composite.singular_upright and cfg.theta_ini > UPRIGHT_START:
        return cfg.with_start(UPRIGHT_START)
    return cfg


def force_variation(force: np.ndarray, y: np.ndarray | None = None) -> float:
    """Coefficient of variation of a force trace, skipping the first (standing) sample.

    With ``y`` the statistic is weighted by stroke displacement instead of
    by sample.
    """
    f = np.asarray(force, dtype=float)
    if y is None:
        tail = f[1:]
        return float(np.std(tail) / np.mean(tail))
    y = np.asarray(y, dtype=float)
    span = y[-1] - y[0]
    mean = np.trapezoid(f, y) / span
    var = np.trapezoid((f - mean) ** 2, y) / span
    return float(math.sqrt(var) / mean)


@dataclass(frozen=True)
class Composition:
    composite: CompositeSpring
    profile: ChargingProfile
    component_forces: tuple
    cv: float
    cv_stroke: float

    @property
    def normalized_energy(self) -> float:
        return self.profile.normalized_energy


def compose(composite: CompositeSpring, geom: LinkageGeometry, cfg: StrokeConfig,
            f_max: float | None = None, n_points: int = DEFAULT_POINTS) -> Composition:
    """Superposed profile of ``composite``.

    With ``f_max`` every component stiffness is scaled by one common factor
    so the combined peak equals ``f_max`` (stiffness ratios are kept).
    """
    run = composite_stroke(composite, cfg)
    theta = run.angles(n_points)
    if f_max is not None:
        if not f_max > 0:
            raise DomainError(f"F_max must be positive, got {f_max!r}")
        peak = float(np.max(superpose(composite, geom, run, theta)))
        if not peak > 0:
            raise UnsolvableError(f"{composite.label} produces no charging force")
        composite = composite.scaled(f_max / peak)
    parts = tuple(np.asarray(charging_force(c, geom, run, theta)) for c in composite.components)
    profile = integrate_profile(lambda th: superpose(composite, geom, run, th), geom, run, n_points, f_max)
    return Composition(composite, profile, parts,
                       force_variation(profile.force), force_variation(profile.force, profile.y))


@dataclass(frozen=True)
class MixOptimum:
    """Best stiffness split between two springs for a given force budget."""

    weight: float
    composite: CompositeSpring
    normalized_energy: float
    normalized_stiffness: tuple

    @property
    def stiffness_ratio(self) -> float:
        """Normalised stiffness of the first component over that of the second."""
        return self.normalized_stiffness[0] / self.normalized_stiffness[1]


def optimize_mix(first: SpringSpec, second: SpringSpec, geom: LinkageGeometry, cfg: StrokeConfig,
                 f_max: float = 1.0, n_points: int = DEFAULT_POINTS, xtol: float = 1e-6) -> MixOptimum:
    """Maximise normalised energy over the stiffness split of two springs.

    Each spring is first scaled to a unit peak on its own; the mix weight
    ``w`` in [0, 1] blends ``w * first + (1 - w) * second`` and the blend is
    rescaled to ``f_max``.
    """
    run = composite_stroke(CompositeSpring((first, second)), cfg)
    theta = run.angles(n_points)
    y = body_displacement(geom, run, theta)
    unit = []
    for spec in (first, second):
        f = np.asarray(charging_force(spec, geom, run, theta))
        unit.append(spec.with_stiffness(spec.stiffness / float(np.max(f))))
    forces = [np.asarray(charging_force(u, geom, run, theta)) for u in unit]

    def energy(w):
        f = w * forces[0] + (1.0 - w) * forces[1]
        return kernels.cumulative_trapezoid(f, y)[-1] / (float(np.max(f)) * geom.d)

    res = minimize_scalar(lambda w: -energy(w), bounds=(0.0, 1.0), method="bounded",
                          options={"xatol": xtol})
    w = float(res.x)
    mix = CompositeSpring((unit[0].with_stiffness(unit[0].stiffness * w),
                           unit[1].with_stiffness(unit[1].stiffness * (1.0 - w))))
    comp = compose(mix, geom, cfg, f_max, n_points)
    stiff = tuple(normalized_stiffness(c, geom, f_max) for c in comp.composite.components)
    return MixOptimum(w, comp.composite, comp.normalized_energy, stiff)


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    gamma: float
    normalized_energy: float | None
    normalized_stiffness: float | None
    note: str = ""

    @property
    def solvable(self) -> bool:
        return self.normalized_energy is not None


@dataclass(frozen=True)
class SweepResult:
    model: str
    f_max: float
    points: tuple = field(default_factory=tuple)

    def at(self, gamma: float) -> SweepPoint:
        for p in self.points:
            if abs(p.gamma - gamma) < 1e-12:
                return p
        raise KeyError(gamma)

    def solvable(self) -> list[SweepPoint]:
        return [p for p in self.points if p.solvable]


def default_gamma_grid(n: int = 101) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def sweep_point(model: str, gamma: float, geom: LinkageGeometry, cfg: StrokeConfig,
                f_max: float = 1.0, n_points: int = DEFAULT_POINTS, count: int = 1) -> SweepPoint:
    spec = SpringSpec(model, 1.0, float(gamma), count)
    try:
        sized, profile = charge(spec, geom, cfg, f_max, n_points)
    except UnsolvableError as exc:
        return SweepPoint(float(gamma), None, None, f"unsolvable: {exc}")
    return SweepPoint(float(gamma), profile.normalized_energy, normalized_stiffness(sized, geom, f_max))


def sweep_orientation(model: str, geom: LinkageGeometry, cfg: StrokeConfig, f_max: float = 1.0,
                      gammas=None, n_points: int = DEFAULT_POINTS, count: int = 1) -> SweepResult:
    """Normalised energy and stiffness across positioning ratios for one model.

    Ratios where the spring never deflects are kept in the result as gaps
    (``normalized_energy is None``) rather than dropped.
    """
    model = normalise_kind(model)
    if model not in ("A", "B", "C"):
        raise DomainError(f"orientation sweeps cover models A, B and C, not {model!r}")
    gammas = default_gamma_grid() if gammas is None else np.asarray(gammas, dtype=float)
    if np.any((gammas < 0) | (gammas > 1)):
        raise DomainError("positioning ratios must lie in [0, 1]")
    points = tuple(sweep_point(model, g, geom, cfg, f_max, n_points, count) for g in gammas)
    return SweepResult(model, f_max, points)


def sweep_start_angle(spec: SpringSpec, geom: LinkageGeometry, starts, theta_end: float = 0.0,
                      f_max: float = 1.0, n_points: int = DEFAULT_POINTS) -> np.ndarray:
    """Normalised energy of ``spec`` sized for ``f_max`` at each standing angle in ``starts``."""
    out = []
    for ti in np.asarray(starts, dtype=float):
        _, profile = charge(spec, geom, StrokeConfig(float(ti), theta_end), f_max, n_points)
        out.append(profile.normalized_energy)
    return np.array(out)


def best_start_angle(spec: SpringSpec, geom: LinkageGeometry, theta_end: float = 0.0,
                     f_max: float = 1.0, n_points: int = DEFAULT_POINTS,
                     lo: float | None = None, hi: float = UPRIGHT_START, n_grid: int = 181) -> tuple[float, float]:
    """Standing angle that maximises stored energy: coarse grid, then bounded refinement."""
    lo = theta_end + math.radians(1.0) if lo is None else lo
    starts = np.linspace(lo, hi, n_grid)
    energies = sweep_start_angle(spec, geom, starts, theta_end, f_max, n_points)
    i = int(np.argmax(energies))
    a, b = starts[max(i - 1, 0)], starts[min(i + 1, n_grid - 1)]
    res = minimize_scalar(
        lambda t: -sweep_start_angle(spec, geom, [t], theta_end, f_max, n_points)[0],
        bounds=(a, b), method="bounded", options={"xatol": 1e-6})
    return float(res.x), float(-res.fun)
