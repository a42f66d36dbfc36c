"""Quasi-static analysis of rhomboidal spring-linkages for jumping robots.

Typical use::

    from springlinkage import LinkageGeometry, StrokeConfig, SpringSpec, charge

    geom = LinkageGeometry(0.05)
    cfg = StrokeConfig.from_degrees(152.0)
    spring, profile = charge(SpringSpec("horizontal"), geom, cfg, f_max=10.0)
    profile.normalized_energy   # about 0.60
"""

from .energetics import (
    DEFAULT_POINTS,
    ChargingProfile,
    CompositeSpring,
    Composition,
    MixOptimum,
    SweepPoint,
    SweepResult,
    best_start_angle,
    charge,
    compose,
    force_variation,
    integrate_profile,
    normalized_stiffness,
    optimize_mix,
    profile_for,
    solve_stiffness,
    superpose,
    sweep_orientation,
)
from .errors import (
    CatalogueError,
    ConfigurationError,
    DomainError,
    InsufficientDataError,
    SingularityError,
    SpringLinkageError,
    UnsolvableError,
)
from .geometry import LinkageGeometry, StrokeConfig, body_displacement, joint_frame, knee_angle
from .oracle import compare, instances_for, oracle_force
from .robots import JumpPrediction, RobotRecord, load_catalogue, predict_improvement
from .springs import (
    SpringSpec,
    charging_force,
    epe_horizontal,
    epe_rotational,
    epe_vertical,
    peak_force_angle_horizontal,
)

__version__ = "0.1.0"

__all__ = [
    "CatalogueError",
    "ChargingProfile",
    "CompositeSpring",
    "Composition",
    "ConfigurationError",
    "DEFAULT_POINTS",
    "DomainError",
    "InsufficientDataError",
    "JumpPrediction",
    "LinkageGeometry",
    "MixOptimum",
    "RobotRecord",
    "SingularityError",
    "SpringLinkageError",
    "SpringSpec",
    "StrokeConfig",
    "SweepPoint",
    "SweepResult",
    "UnsolvableError",
    "best_start_angle",
    "body_displacement",
    "charge",
    "charging_force",
    "compare",
    "compose",
    "epe_horizontal",
    "epe_rotational",
    "epe_vertical",
    "force_variation",
    "instances_for",
    "integrate_profile",
    "joint_frame",
    "knee_angle",
    "load_catalogue",
    "normalized_stiffness",
    "optimize_mix",
    "oracle_force",
    "peak_force_angle_horizontal",
    "predict_improvement",
    "profile_for",
    "solve_stiffness",
    "superpose",
    "sweep_orientation",
]
