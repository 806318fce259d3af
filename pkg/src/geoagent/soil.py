"""Core geotechnical value types and derived index properties.

Units are fixed per field and never converted at runtime: elevations and
dimensions in m, strengths and pressures in kPa, unit weights in kN/m3,
sieve fractions and Atterberg limits in percent, angles in degrees.
Optional fields are explicit ``None``; operations that need a missing
field fail loudly rather than assume a default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingDataError, ValidationError

_ELEV_TOL = 1e-9


@dataclass(frozen=True)
class SoilSample:
    """Gradation and plasticity inputs for classification.

    pass_sieve4 / pass_sieve200 are percent passing; d10/d30/d60 are grain
    diameters in mm; limits are water contents in percent.
    """

    pass_sieve4: float
    pass_sieve200: float
    d10: float | None = None
    d30: float | None = None
    d60: float | None = None
    liquid_limit: float | None = None
    plastic_limit: float | None = None

    def __post_init__(self):
        if not (0 <= self.pass_sieve200 <= self.pass_sieve4 <= 100):
            raise ValidationError(
                f"require 0 <= pass_sieve200 ({self.pass_sieve200}) <= "
                f"pass_sieve4 ({self.pass_sieve4}) <= 100"
            )
        ds = (self.d10, self.d30, self.d60)
        if all(d is not None for d in ds):
            if not (0 < self.d10 <= self.d30 <= self.d60):
                raise ValidationError(
                    f"require 0 < d10 <= d30 <= d60, got {ds}"
                )
        if self.liquid_limit is not None and self.plastic_limit is not None:
            if self.plastic_limit > self.liquid_limit:
                raise ValidationError(
                    f"plastic_limit ({self.plastic_limit}) exceeds "
                    f"liquid_limit ({self.liquid_limit})"
                )

    @property
    def gravel_fraction(self) -> float:
        """Percent retained on sieve 4."""
        return 100.0 - self.pass_sieve4

    @property
    def sand_fraction(self) -> float:
        """Percent passing sieve 4 but retained on sieve 200."""
        return self.pass_sieve4 - self.pass_sieve200

    @property
    def fines(self) -> float:
        return self.pass_sieve200


@dataclass(frozen=True)
class IndexProperties:
    """Derived index values; absent inputs yield absent outputs."""

    plasticity_index: float | None = None
    cu: float | None = None
    cc: float | None = None


def derive_index_properties(sample: SoilSample) -> IndexProperties:
    """Compute PI = LL - PL, Cu = D60/D10, Cc = D30^2/(D10*D60).

    Each output is None when its inputs are missing; nothing is defaulted.
    """
    pi = None
    if sample.liquid_limit is not None and sample.plastic_limit is not None:
        pi = sample.liquid_limit - sample.plastic_limit
        if pi < 0:
            raise ValidationError("negative plasticity index (PL > LL)")
    cu = cc = None
    if sample.d10 is not None and sample.d60 is not None:
        if sample.d10 == 0:
            raise ValidationError("d10 must be positive")
        cu = sample.d60 / sample.d10
        if sample.d30 is not None:
            cc = sample.d30 ** 2 / (sample.d10 * sample.d60)
    return IndexProperties(plasticity_index=pi, cu=cu, cc=cc)


def a_line(liquid_limit: float) -> float:
    """Plasticity-chart A-line: 0.73 * (LL - 20).

    May be negative for LL < 20; callers compare against it, never clamp.
    """
    return 0.73 * (liquid_limit - 20.0)


@dataclass(frozen=True)
class SoilLayer:
    """One layer of a profile; elevations are signed m (e.g. asl).

    ``su_points`` optionally tabulates (elevation, Su) pairs inside the
    layer for linear interpolation; a bare ``su`` is uniform.
    """

    material: str
    top_elevation: float
    bottom_elevation: float
    su: float | None = None
    unit_weight: float | None = None
    friction_angle: float | None = None
    su_points: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.bottom_elevation >= self.top_elevation:
            raise ValidationError(
                f"layer {self.material!r}: bottom ({self.bottom_elevation}) "
                f"must lie below top ({self.top_elevation})"
            )

    def contains(self, elevation: float) -> bool:
        return self.bottom_elevation - _ELEV_TOL <= elevation <= self.top_elevation + _ELEV_TOL


@dataclass(frozen=True)
class SoilProfile:
    """Ordered, contiguous stack of layers, top first."""

    layers: tuple[SoilLayer, ...]

    def __post_init__(self):
        if not self.layers:
            raise ValidationError("profile needs at least one layer")
        for upper, lower in zip(self.layers, self.layers[1:]):
            if lower.top_elevation > upper.top_elevation:
                raise ValidationError("layers must be sorted by descending top elevation")
            if abs(upper.bottom_elevation - lower.top_elevation) > _ELEV_TOL:
                raise ValidationError(
                    f"gap or overlap between {upper.material!r} (bottom "
                    f"{upper.bottom_elevation}) and {lower.material!r} "
                    f"(top {lower.top_elevation})"
                )

    @property
    def top(self) -> float:
        return self.layers[0].top_elevation

    @property
    def bottom(self) -> float:
        return self.layers[-1].bottom_elevation

    def layer_at(self, elevation: float) -> SoilLayer:
        if not (self.bottom - _ELEV_TOL <= elevation <= self.top + _ELEV_TOL):
            raise MissingDataError(
                f"elevation {elevation} outside profile extent "
                f"[{self.bottom}, {self.top}]"
            )
        for layer in self.layers:
            if layer.contains(elevation):
                return layer
        raise MissingDataError(f"no layer covers elevation {elevation}")


@dataclass(frozen=True)
class Foundation:
    """Foundation geometry; dimensions in m, founding depth >= 0."""

    shape: str  # circular | strip | rectangular
    diameter: float | None = None
    width: float | None = None
    length: float | None = None
    founding_depth: float = 0.0

    def __post_init__(self):
        if self.shape not in ("circular", "strip", "rectangular"):
            raise ValidationError(f"unknown foundation shape {self.shape!r}")
        if self.founding_depth < 0:
            raise ValidationError("founding_depth must be >= 0")
        if self.shape == "circular":
            if self.diameter is None or self.diameter <= 0:
                raise ValidationError("circular foundation needs diameter > 0")
            if self.width is not None or self.length is not None:
                raise ValidationError("circular foundation carries only a diameter")
        else:
            if self.diameter is not None:
                raise ValidationError(f"{self.shape} foundation has no diameter")
            if self.width is None or self.width <= 0:
                raise ValidationError(f"{self.shape} foundation needs width > 0")
            if self.shape == "rectangular":
                if self.length is None or self.length <= 0:
                    raise ValidationError("rectangular foundation needs length > 0")
                if self.width > self.length:
                    raise ValidationError("rectangular foundation requires B <= L")


# --- file formats -----------------------------------------------------------
#
# Line-oriented profile format, one layer per line, '#' comments:
#   material top_elevation bottom_elevation [su=..] [unit_weight=..]
#            [friction_angle=..] [su_points=elev:su;elev:su]
#
# Structured format: JSON list of objects whose keys mirror the field names.

_LAYER_KEYS = ("su", "unit_weight", "friction_angle")


def parse_profile_text(text: str) -> SoilProfile:
    layers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 3:
            raise ValidationError(f"profile line {lineno}: need material top bottom")
        material, top, bottom = parts[0], float(parts[1]), float(parts[2])
        kwargs: dict = {}
        for item in parts[3:]:
            key, _, value = item.partition("=")
            if key in _LAYER_KEYS:
                kwargs[key] = float(value)
            elif key == "su_points":
                pts = []
                for pair in value.split(";"):
                    e, s = pair.split(":")
                    pts.append((float(e), float(s)))
                kwargs["su_points"] = tuple(pts)
            else:
                raise ValidationError(f"profile line {lineno}: unknown field {key!r}")
        layers.append(SoilLayer(material, top, bottom, **kwargs))
    return SoilProfile(tuple(layers))


def load_profile(path: str | Path) -> SoilProfile:
    """Read a profile from the JSON or line-oriented text format."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        records = json.loads(text)
        layers = tuple(
            SoilLayer(
                material=r["material"],
                top_elevation=r["top_elevation"],
                bottom_elevation=r["bottom_elevation"],
                su=r.get("su"),
                unit_weight=r.get("unit_weight"),
                friction_angle=r.get("friction_angle"),
                su_points=tuple(map(tuple, r.get("su_points", ()))),
            )
            for r in records
        )
        return SoilProfile(layers)
    return parse_profile_text(text)


_SAMPLE_FIELDS = (
    "pass_sieve4", "pass_sieve200", "d10", "d30", "d60",
    "liquid_limit", "plastic_limit",
)


def sample_from_dict(record: dict) -> SoilSample:
    unknown = set(record) - set(_SAMPLE_FIELDS)
    if unknown:
        raise ValidationError(f"unknown sample fields: {sorted(unknown)}")
    return SoilSample(**record)


def parse_samples_text(text: str) -> list[SoilSample]:
    """One sample per line as space-separated field=value pairs."""
    samples = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        record = {}
        for item in line.split():
            key, _, value = item.partition("=")
            record[key] = float(value)
        samples.append(sample_from_dict(record))
    return samples


def load_samples(path: str | Path) -> list[SoilSample]:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return [sample_from_dict(r) for r in json.loads(text)]
    return parse_samples_text(text)
