"""Jump-height accounting for catalogued spring-driven jumping robots.

Heights follow from energy conservation only: a take-off speed ``v`` gives
``v**2 / (2 g)`` and a stored energy ``E`` gives ``E / (m g)``.  Losses in
the acceleration phase (rotating and unsprung masses, early take-off, drag)
are not modelled; a robot's measured height therefore already contains
them, and the improved height keeps that measured efficiency while raising
the stored energy to the ideal spring's ``F_max d``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import CatalogueError, DomainError, InsufficientDataError

G = 9.81

CATALOGUE_FIELDS = ("name", "mass_kg", "f_max_n", "d_m", "energy_fraction", "v_to_mps", "source")
PREDICTION_FIELDS = (
    "force_to_weight",
    "h_measured_m", "h_energy_m", "h_ideal_m", "h_improved_m",
    "h_measured_over_d", "h_energy_over_d", "h_ideal_over_d", "h_improved_over_d",
    "improvement_percent",
)


@dataclass(frozen=True)
class RobotRecord:
    """One robot; unknown quantities are ``None``."""

    name: str
    mass: float | None = None
    f_max: float | None = None
    d: float | None = None
    energy_fraction: float | None = None
    v_to: float | None = None
    source: str = ""

    def __post_init__(self):
        for label, value in (("mass_kg", self.mass), ("f_max_n", self.f_max), ("d_m", self.d)):
            if value is not None and not value > 0:
                raise DomainError(f"{self.name}: {label} must be positive, got {value!r}")
        if self.energy_fraction is not None and not (0.0 <= self.energy_fraction <= 1.0):
            raise DomainError(f"{self.name}: energy_fraction must lie in [0, 1], got {self.energy_fraction!r}")
        if self.v_to is not None and self.v_to < 0:
            raise DomainError(f"{self.name}: v_to_mps must be nonnegative, got {self.v_to!r}")

    def force_to_weight(self, g: float = G) -> float | None:
        if self.f_max is None or self.mass is None:
            return None
        return self.f_max / (self.mass * g)


@dataclass(frozen=True)
class JumpPrediction:
    """Heights in metres (``None`` when the record cannot support them).

    ``h_ideal`` is the ideal spring's energy-only height ``F_max d / (m g)``;
    ``h_improved`` is the measured height rescaled by the gain in stored
    energy, ``h_measured / energy_fraction``.
    """

    record: RobotRecord
    force_to_weight: float | None
    h_measured: float | None
    h_energy: float | None
    h_ideal: float | None
    h_improved: float | None
    improvement_percent: float | None

    def normalized(self, h: float | None) -> float | None:
        if h is None or self.record.d is None:
            return None
        return h / self.record.d

    def as_row(self) -> dict:
        r = self.record
        row = {
            "name": r.name, "mass_kg": r.mass, "f_max_n": r.f_max, "d_m": r.d,
            "energy_fraction": r.energy_fraction, "v_to_mps": r.v_to, "source": r.source,
            "force_to_weight": self.force_to_weight,
            "h_measured_m": self.h_measured, "h_energy_m": self.h_energy,
            "h_ideal_m": self.h_ideal, "h_improved_m": self.h_improved,
        }
        for key in ("measured", "energy", "ideal", "improved"):
            row[f"h_{key}_over_d"] = self.normalized(getattr(self, f"h_{key}"))
        row["improvement_percent"] = self.improvement_percent
        return row


def height_from_velocity(v_to: float, g: float = G) -> float:
    if v_to < 0:
        raise DomainError(f"take-off speed must be nonnegative, got {v_to!r}")
    return v_to * v_to / (2.0 * g)


def height_from_energy(epe: float, mass: float, g: float = G) -> float:
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")
    if epe < 0:
        raise DomainError(f"stored energy must be nonnegative, got {epe!r}")
    return epe / (mass * g)


def predict_improvement(record: RobotRecord, g: float = G) -> JumpPrediction:
    """Heights of ``record`` as built and with an ideal constant-force spring-linkage."""
    frac = record.energy_fraction
    if record.v_to is None and frac is None:
        raise InsufficientDataError(
            f"{record.name}: needs a take-off speed or a stored-energy fraction")
    h_measured = None if record.v_to is None else height_from_velocity(record.v_to, g)
    h_ideal = h_energy = None
    if None not in (record.f_max, record.d, record.mass):
        ideal = record.f_max * record.d
        h_ideal = height_from_energy(ideal, record.mass, g)
        if frac is not None:
            h_energy = height_from_energy(frac * ideal, record.mass, g)
    h_improved = improvement = None
    if frac is not None and frac > 0:
        improvement = 100.0 * (1.0 / frac - 1.0)
        if h_measured is not None:
            h_improved = h_measured / frac
    return JumpPrediction(record, record.force_to_weight(g), h_measured, h_energy,
                          h_ideal, h_improved, improvement)


def _parse_float(text: str, row: int, field: str) -> float | None:
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise CatalogueError(f"row {row}: field {field!r} is not a number: {text!r}", row, field) from None
    if not math.isfinite(value):
        raise CatalogueError(f"row {row}: field {field!r} is not finite: {text!r}", row, field)
    return value


def parse_catalogue(text: str) -> list[RobotRecord]:
    """Parse catalogue CSV text.  Row numbers in errors count the header as row 1."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        return []
    missing = [f for f in CATALOGUE_FIELDS if f not in header]
    if missing:
        raise CatalogueError(f"row 1: header lacks field(s) {', '.join(missing)}", 1, missing[0])
    records = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise CatalogueError(
                f"row {lineno}: expected {len(header)} fields, found {len(cells)}", lineno, None)
        raw = dict(zip(header, cells))
        if not raw["name"].strip():
            raise CatalogueError(f"row {lineno}: field 'name' is empty", lineno, "name")
        values = {f: _parse_float(raw[f], lineno, f)
                  for f in ("mass_kg", "f_max_n", "d_m", "energy_fraction", "v_to_mps")}
        try:
            records.append(RobotRecord(
                name=raw["name"].strip(), mass=values["mass_kg"], f_max=values["f_max_n"],
                d=values["d_m"], energy_fraction=values["energy_fraction"],
                v_to=values["v_to_mps"], source=raw["source"].strip()))
        except DomainError as exc:
            field = next((f for f in CATALOGUE_FIELDS if f in str(exc)), None)
            raise CatalogueError(f"row {lineno}: {exc}", lineno, field) from None
    return records


def load_catalogue(path: str | Path | None = None) -> list[RobotRecord]:
    """Read a catalogue file; ``None`` loads the bundled robot table."""
    if path is None:
        text = resources.files("springlinkage").joinpath("data/robots.csv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_catalogue(text)


def dump_catalogue(records) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CATALOGUE_FIELDS)
    for r in records:
        writer.writerow([r.name] + ["" if v is None else repr(v)
                                    for v in (r.mass, r.f_max, r.d, r.energy_fraction, r.v_to)]
                        + [r.source])
    return out.getvalue()
