"""Acceptance criteria 1-12 at their stated tolerances.

Each test records one or more parts of a criterion; ``conftest.py`` prints
one PASS/FAIL line per criterion at the end of the run.  Criteria with
several parts pass only when every part passes.
"""

import math
import time

import numpy as np
import pytest

from springlinkage import kernels
from springlinkage.energetics import (
    CompositeSpring,
    best_start_angle,
    charge,
    compose,
    normalized_stiffness,
    optimize_mix,
    profile_for,
)
from springlinkage.geometry import LinkageGeometry, StrokeConfig
from springlinkage.oracle import compare, instances_for, interior_angles
from springlinkage.robots import load_catalogue, predict_improvement
from springlinkage.springs import (
    SpringSpec,
    charging_force,
    charging_force_horizontal,
    charging_force_model_a,
    charging_force_model_a_principal,
    charging_force_model_b,
    charging_force_model_c,
    charging_force_vertical,
    epe_rotational,
    peak_force_angle_horizontal,
    spring_deflection,
)
from springlinkage.errors import InsufficientDataError, UnsolvableError

RESULTS = {}

G = LinkageGeometry(0.05)
UP = StrokeConfig.from_degrees(179.9, 0.0)
N = 1000


def record(criterion, part, passed, detail):
    RESULTS.setdefault(criterion, []).append((part, bool(passed), detail))
    return passed


def test_criterion_01_vertical_energy():
    start = time.perf_counter()
    _, prof = charge(SpringSpec("vertical"), G, UP, 1.0, N)
    elapsed = time.perf_counter() - start
    e = prof.normalized_energy
    ok = record(1, "energy", abs(e - 0.500) <= 0.002 and elapsed < 1.0,
                f"normalized EPE {e:.6f} (0.500 +- 0.002), {elapsed * 1e3:.1f} ms (< 1 s)")
    assert ok


def test_criterion_02_rotational_energy():
    _, prof = charge(SpringSpec("rotational"), G, UP, 1.0, N)
    quad = prof.normalized_energy
    closed = epe_rotational(UP, 1.0, 1.0)
    agree = abs(quad - closed) / closed
    ok = record(2, "energy", abs(quad - 0.785) <= 0.002 and agree < 1e-3,
                f"quadrature {quad:.6f}, closed form {closed:.6f} (0.785 +- 0.002), "
                f"disagreement {agree:.2e} (< 1e-3)")
    assert ok


def test_criterion_03_horizontal_optimum():
    spec = SpringSpec("horizontal")
    best, _ = best_start_angle(spec, G, n_points=N)
    ok_start = record(3, "best start", abs(math.degrees(best) - 152.0) <= 1.0,
                      f"energy-maximising theta_ini {math.degrees(best):.3f} deg (152 +- 1)")
    ti = math.radians(152.0)
    peak = math.degrees(peak_force_angle_horizontal(ti))
    cfg = StrokeConfig(ti)
    dense = np.linspace(ti, 0.0, 1_000_001)
    argmax = math.degrees(dense[int(np.argmax(charging_force_horizontal(G, cfg, 1.0, dense)))])
    ok_peak = record(3, "peak angle", abs(peak - 103.0) <= 0.5 and abs(peak - argmax) <= 0.01,
                     f"peak angle {peak:.4f} deg (103 +- 0.5), numeric argmax {argmax:.4f} deg "
                     f"(within 0.01)")
    _, prof = charge(spec, G, cfg, 1.0, N)
    e = prof.normalized_energy
    ok_e = record(3, "energy", abs(e - 0.60) <= 0.01, f"normalized EPE at 152 deg {e:.5f} (0.60 +- 0.01)")
    assert ok_start and ok_peak and ok_e


def _sized(model, gamma):
    sized, prof = charge(SpringSpec(model, 1.0, gamma), G, UP, 1.0, N)
    return prof.normalized_energy, normalized_stiffness(sized, G, 1.0)


def test_criterion_04a_model_a_at_0_8():
    e, k = _sized("A", 0.8)
    ok = record(4, "gamma1=0.8", abs(e - 0.62) <= 0.01 and abs(k - 3.5) <= 0.1,
                f"gamma1=0.8: energy {e:.5f} (0.62 +- 0.01), stiffness {k:.4f} (3.5 +- 0.1)")
    assert ok


def test_criterion_04b_model_a_near_one():
    e, k = _sized("A", 0.999)
    ok = record(4, "gamma1=0.999", abs(e - 0.65) <= 0.01 and k > 100,
                f"gamma1=0.999: energy {e:.5f} (0.65 +- 0.01), stiffness {k:.4f} (> 100)")
    assert ok


def test_criterion_05_reductions():
    theta = UP.angles(N)
    k = 3.0
    pairs = [
        ("A(0) vs vertical", charging_force_model_a(G, UP, 0.0, k, theta), charging_force_vertical(G, UP, k, theta)),
        # the mid-link spring of B and C spans half the knee-to-knee / body-to-foot distance,
        # so it matches the full-length spring of a quarter of the stiffness
        ("B(0.5) vs horizontal(k/4)", charging_force_model_b(G, UP, 0.5, k, theta),
         charging_force_horizontal(G, UP, k / 4.0, theta)),
        ("C(0.5) vs vertical(k/4)", charging_force_model_c(G, UP, 0.5, k, theta),
         charging_force_vertical(G, UP, k / 4.0, theta)),
    ]
    parts = []
    for name, a, b in pairs:
        scale = np.maximum(np.abs(a), np.abs(b))
        rel = np.where(scale > 0, np.abs(a - b) / np.where(scale > 0, scale, 1.0), 0.0)
        worst = float(rel.max())
        parts.append(record(5, name, worst <= 1e-9, f"{name}: max relative difference {worst:.2e} (1e-9)"))
    assert all(parts)


ORACLE_CASES = ([SpringSpec("vertical", 2.0), SpringSpec("horizontal", 2.0), SpringSpec("rotational", 0.3)]
                + [SpringSpec("B", 2.0, g) for g in (0.25, 0.5, 0.75)]
                + [SpringSpec("C", 2.0, g) for g in (0.25, 0.5, 0.75)]
                + [SpringSpec("A", 2.0, g) for g in (0.0, 0.25, 0.5, 0.8)])


@pytest.mark.parametrize("spec", ORACLE_CASES, ids=lambda s: s.label())
def test_criterion_06_oracle(spec):
    thetas = interior_angles(UP, 200)
    res = compare(lambda th: charging_force(spec, G, UP, th), G, UP, instances_for(spec, G, UP), thetas, warn=False)
    ok = record(6, spec.label(), res.passed,
                f"{spec.label()}: max relative error {res.max_relative_error:.2e} (1e-6)")
    assert ok


def test_criterion_06_model_a_branch_report():
    # reported, not judged: which inverse-sine branch of the spring angle agrees with the oracle
    spec = SpringSpec("A", 2.0, 0.999)
    thetas = interior_angles(UP, 200)
    springs = instances_for(spec, G, UP)
    geo = compare(lambda th: charging_force(spec, G, UP, th), G, UP, springs, thetas, warn=False)
    pri = compare(lambda th: charging_force_model_a_principal(G, UP, 0.999, 2.0, th), G, UP, springs, thetas,
                  warn=False)
    RESULTS.setdefault("6-report", []).append(
        ("branch", True, f"gamma1=0.999: geometric branch {geo.max_relative_error:.2e}, "
                         f"principal branch {pri.max_relative_error:.2e} against the oracle"))


TRANSLATIONAL = [c for c in ORACLE_CASES if c.kind != "rotational"]


@pytest.mark.parametrize("spec", TRANSLATIONAL, ids=lambda s: s.label())
def test_criterion_07_work_energy(spec):
    prof = profile_for(spec, G, UP, N)
    dl = spring_deflection(spec.kind, spec.gamma, G, UP, UP.theta_end)
    stored = 0.5 * spec.effective_stiffness * dl ** 2
    work = prof.energy
    floor = 1e-12 * spec.effective_stiffness * G.d ** 2
    rel = 0.0 if max(abs(work), stored) <= floor else abs(work - stored) / max(abs(work), stored)
    ok = record(7, spec.label(), rel < 1e-3,
                f"{spec.label()}: integral {work:.6e} J vs 1/2 k dL^2 {stored:.6e} J, rel {rel:.2e} (< 1e-3)")
    assert ok


def test_criterion_08a_composition_energy():
    res = compose(CompositeSpring((SpringSpec("vertical"), SpringSpec("horizontal"))), G, UP, 1.0, N)
    e = res.normalized_energy
    ok = record(8, "energy", abs(e - 1.00) <= 0.01, f"normalized EPE {e:.5f} (1.00 +- 0.01)")
    assert ok


def test_criterion_08b_composition_flatness():
    res = compose(CompositeSpring((SpringSpec("vertical"), SpringSpec("horizontal"))), G, UP, 1.0, N)
    ok = record(8, "flatness", res.cv < 0.002,
                f"CV of superposed force {100 * res.cv:.3f}% per sample, excluding the first "
                f"(< 0.2%); stroke-weighted {100 * res.cv_stroke:.3f}%")
    assert ok


def test_criterion_09_rotational_horizontal_mix():
    best = optimize_mix(SpringSpec("rotational"), SpringSpec("horizontal"), G, UP, 1.0, N)
    ok = record(9, "optimum", abs(best.normalized_energy - 0.97) <= 0.01,
                f"normalized EPE {best.normalized_energy:.5f} (0.97 +- 0.01) at mix weight "
                f"{best.weight:.4f}, stiffness ratio k_r~/k~ {best.stiffness_ratio:.4f}")
    assert ok


@pytest.mark.parametrize("kind,gamma", [("vertical", None), ("horizontal", None), ("rotational", None),
                                        ("A", 0.8), ("B", 0.25), ("C", 0.75)])
def test_criterion_10_count_invariance(kind, gamma):
    one = SpringSpec(kind, 2.0, gamma, count=1)
    two = SpringSpec(kind, 1.0, gamma, count=2)
    p1, p2 = profile_for(one, G, UP, N), profile_for(two, G, UP, N)
    e1 = charge(one, G, UP, 1.0, N)[1].normalized_energy
    e2 = charge(two, G, UP, 1.0, N)[1].normalized_energy
    ok = record(10, one.label(), np.array_equal(p1.force, p2.force) and e1 == e2,
                f"{one.label()}: forces bitwise equal {np.array_equal(p1.force, p2.force)}, "
                f"energies {e1!r} vs {e2!r}")
    assert ok


def test_criterion_11_jump_prediction():
    preds = []
    for rec in load_catalogue():
        try:
            preds.append(predict_improvement(rec))
        except InsufficientDataError:
            continue
    hybrid = next(p for p in preds if p.record.name == "Hybrid")
    h = hybrid.normalized(hybrid.h_improved)
    ok_h = record(11, "hybrid", abs(h - 172) <= 3,
                  f"hybrid: normalized height {hybrid.normalized(hybrid.h_measured):.2f} -> {h:.2f} (172 +- 3)")
    imps = [p.improvement_percent for p in preds if p.improvement_percent is not None]
    ok_band = record(11, "band", min(imps) >= 50.0 and max(imps) > 160.0,
                     f"improvements {', '.join(f'{i:.1f}%' for i in imps)} (all >= 50%, top > 160%)")
    assert ok_h and ok_band


def _reported_configs():
    gammas = list(np.linspace(0.0, 1.0, 21)) + [0.8, 0.999]
    for model in ("A", "B", "C"):
        for g in gammas:
            yield SpringSpec(model, 1.0, float(g)), UP
    yield SpringSpec("vertical"), UP
    yield SpringSpec("rotational"), UP
    yield SpringSpec("horizontal"), UP
    yield SpringSpec("horizontal"), StrokeConfig.from_degrees(152.0)


def test_criterion_12_quadrature_convergence():
    worst, where, skipped = 0.0, "", 0
    for spec, cfg in _reported_configs():
        try:
            e1 = charge(spec, G, cfg, 1.0, 1000)[1].energy
            e2 = charge(spec, G, cfg, 1.0, 2000)[1].energy
        except UnsolvableError:
            skipped += 1  # degenerate ratios with no charging force report no energy
            continue
        rel = abs(e2 - e1) / e1
        if rel > worst:
            worst, where = rel, spec.label()
    for comp in (CompositeSpring((SpringSpec("vertical"), SpringSpec("horizontal"))),):
        e1 = compose(comp, G, UP, 1.0, 1000).profile.energy
        e2 = compose(comp, G, UP, 1.0, 2000).profile.energy
        rel = abs(e2 - e1) / e1
        if rel > worst:
            worst, where = rel, comp.label
    ok = record(12, "convergence", worst < 1e-3,
                f"largest 1000 -> 2000 point change {100 * worst:.4f}% at {where} (< 0.1%); "
                f"{skipped} unsolvable ratios have no EPE to report")
    assert ok


def test_backend_recorded():
    RESULTS.setdefault("backend", []).append(("backend", True, f"kernel backend: {kernels.BACKEND}"))
