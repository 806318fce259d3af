"""Verified calculation library behind the agent's action tools.

Conventions:

* Nc for the undrained (phi = 0) case is exactly 5.14, a documented
  round constant, not 2 + pi.
* Shape factors are lookup constants (circular 1.11, strip 1.00,
  rectangular defaults to the circular value).
* General bearing factors use the Prandtl/Reissner Nc, Nq and the
  Ngamma = 2 (Nq + 1) tan(phi) form.
* The 2:1 stress transfer grows each plan dimension by the depth.
* All factor-of-safety and middle-third thresholds are inclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import MissingDataError, RangeError, ValidationError
from .soil import Foundation, SoilProfile

NC_UNDRAINED = 5.14
DEFAULT_REQUIRED_FOS = 1.25
AUDIT_TOLERANCE = 0.01

SHAPE_FACTORS = {
    "circular": 1.11,
    "strip": 1.00,
    "rectangular": 1.11,  # configured equal to circular; no derivation published
}


@dataclass(frozen=True)
class BearingResult:
    """Ultimate bearing capacity plus every factor that produced it."""

    q_f: float  # kPa
    method: str  # undrained | general
    inputs: dict = field(default_factory=dict)
    factors: dict = field(default_factory=dict)


def bearing_capacity_undrained(su: float, shape_factor: float) -> BearingResult:
    """q_f = Nc * Sc * Su for saturated clay (phi = 0)."""
    if su < 0:
        raise ValidationError("undrained strength must be >= 0")
    if shape_factor <= 0:
        raise ValidationError("shape factor must be > 0")
    q_f = NC_UNDRAINED * shape_factor * su
    return BearingResult(
        q_f=q_f,
        method="undrained",
        inputs={"su": su, "shape_factor": shape_factor},
        factors={"Nc": NC_UNDRAINED, "Sc": shape_factor},
    )


def bearing_factors(phi: float) -> tuple[float, float, float]:
    """(Nc, Nq, Ngamma) for friction angle phi in degrees."""
    if not 0 <= phi < 60:
        raise RangeError(f"friction angle {phi} outside [0, 60)")
    if phi == 0:
        return NC_UNDRAINED, 1.0, 0.0
    rad = math.radians(phi)
    nq = math.exp(math.pi * math.tan(rad)) * math.tan(math.radians(45) + rad / 2) ** 2
    nc = (nq - 1.0) / math.tan(rad)
    ngamma = 2.0 * (nq + 1.0) * math.tan(rad)
    return nc, nq, ngamma


def bearing_capacity_general(
    c: float, phi: float, gamma: float, width: float, surcharge: float
) -> BearingResult:
    """q_ult = c*Nc + sigma_v*Nq + 0.5*gamma*B*Ngamma."""
    for name, value in (("c", c), ("gamma", gamma), ("width", width), ("surcharge", surcharge)):
        if value < 0:
            raise ValidationError(f"{name} must be >= 0")
    nc, nq, ngamma = bearing_factors(phi)
    q_f = c * nc + surcharge * nq + 0.5 * gamma * width * ngamma
    return BearingResult(
        q_f=q_f,
        method="general",
        inputs={"c": c, "phi": phi, "gamma": gamma, "width": width, "surcharge": surcharge},
        factors={"Nc": nc, "Nq": nq, "Ngamma": ngamma},
    )


def shape_factor(shape: str) -> float:
    if shape not in SHAPE_FACTORS:
        raise ValidationError(f"unknown foundation shape {shape!r}")
    return SHAPE_FACTORS[shape]


def stress_spread_width(surface_dimension: float, depth: float) -> float:
    """2:1 stress transfer: plan dimension grows by half the depth per side."""
    if surface_dimension < 0 or depth < 0:
        raise ValidationError("dimensions must be >= 0")
    return surface_dimension + depth


def max_load(q_f: float, foundation: Foundation, transfer_depth: float) -> float:
    """Total load in kN the spread area carries at the transfer depth."""
    if q_f < 0:
        raise ValidationError("bearing capacity must be >= 0")
    if foundation.shape == "circular":
        d = stress_spread_width(foundation.diameter, transfer_depth)
        area = math.pi / 4.0 * d * d
    elif foundation.shape == "rectangular":
        b = stress_spread_width(foundation.width, transfer_depth)
        length = stress_spread_width(foundation.length, transfer_depth)
        area = b * length
    else:
        raise ValidationError(
            "strip foundation carries load per unit length; use line_load"
        )
    return q_f * area


def line_load(q_f: float, foundation: Foundation, transfer_depth: float) -> float:
    """Load per unit length (kN/m) for a strip foundation."""
    if foundation.shape != "strip":
        raise ValidationError("line_load applies to strip foundations only")
    return q_f * stress_spread_width(foundation.width, transfer_depth)


def interpolate_su(profile: SoilProfile, elevation: float) -> float:
    """Undrained strength at an elevation: tabulated points interpolated
    linearly inside the layer, else the layer's uniform Su."""
    layer = profile.layer_at(elevation)
    if layer.su_points:
        pts = sorted(layer.su_points)
        elevs = [p[0] for p in pts]
        if not elevs[0] <= elevation <= elevs[-1]:
            raise RangeError(
                f"elevation {elevation} outside tabulated range "
                f"[{elevs[0]}, {elevs[-1]}] in layer {layer.material!r}"
            )
        for (e0, s0), (e1, s1) in zip(pts, pts[1:]):
            if e0 <= elevation <= e1:
                if e1 == e0:
                    return s0
                return s0 + (s1 - s0) * (elevation - e0) / (e1 - e0)
        return pts[-1][1]
    if layer.su is None:
        raise MissingDataError(f"layer {layer.material!r} has no undrained strength")
    return layer.su


def truck_count(volume: float, capacity: float, loss_fraction: float) -> int:
    """Trucks needed to move a volume, inflated by the loss fraction."""
    if capacity <= 0:
        raise ValidationError("truck capacity must be > 0")
    if loss_fraction < 0:
        raise ValidationError("loss fraction must be >= 0")
    return math.ceil(volume * (1.0 + loss_fraction) / capacity)


def rankine_ka(phi: float) -> float:
    """Rankine active earth pressure coefficient (1 - sin phi)/(1 + sin phi)."""
    if not 0 <= phi < 90:
        raise RangeError(f"friction angle {phi} outside [0, 90)")
    s = math.sin(math.radians(phi))
    return (1.0 - s) / (1.0 + s)


def active_thrust(gamma: float, height: float, phi: float) -> float:
    """Active thrust Pa = 0.5 * Ka * gamma * H^2 (kN/m); passive resistance
    is deliberately excluded from the wall checks."""
    if gamma < 0 or height < 0:
        raise ValidationError("gamma and height must be >= 0")
    return 0.5 * rankine_ka(phi) * gamma * height * height


def wall_sliding_fos(
    friction_coeff: float,
    vertical_load: float,
    thrust: float,
    required_fos: float = DEFAULT_REQUIRED_FOS,
) -> tuple[float, bool]:
    """FoS = mu * sum(V) / Pa; passes inclusively at the required FoS."""
    if thrust <= 0:
        raise ValidationError("active thrust must be > 0")
    fos = friction_coeff * vertical_load / thrust
    return fos, fos >= required_fos


def wall_eccentricity(
    moment: float, vertical_load: float, base_width: float
) -> tuple[float, bool]:
    """e = M_net / sum(V); middle third passes inclusively at |e| = B/6."""
    if vertical_load <= 0:
        raise ValidationError("vertical load must be > 0")
    e = moment / vertical_load
    return e, abs(e) <= base_width / 6.0


def wall_bearing_check(
    vertical_load: float,
    base_width: float,
    eccentricity: float,
    q_ult: float,
    required_fos: float = DEFAULT_REQUIRED_FOS,
) -> tuple[float, bool]:
    """Meyerhof reduced width: q = V / (B - 2|e|), passing at q <= q_ult/FoS."""
    effective = base_width - 2.0 * abs(eccentricity)
    if effective <= 0:
        raise ValidationError("resultant falls outside the base (B - 2|e| <= 0)")
    q = vertical_load / effective
    return q, q <= q_ult / required_fos


@dataclass(frozen=True)
class WallCheckReport:
    """Independent sliding, overturning, and bearing checks for one wall."""

    sliding_fos: float
    sliding_ok: bool
    eccentricity: float
    middle_third_ok: bool
    bearing_demand: float
    bearing_ok: bool
    required_fos: float = DEFAULT_REQUIRED_FOS


def check_wall(
    gamma: float,
    height: float,
    phi: float,
    friction_coeff: float,
    vertical_load: float,
    base_width: float,
    moment: float,
    q_ult: float,
    required_fos: float = DEFAULT_REQUIRED_FOS,
) -> WallCheckReport:
    thrust = active_thrust(gamma, height, phi)
    fos, sliding_ok = wall_sliding_fos(friction_coeff, vertical_load, thrust, required_fos)
    e, middle_ok = wall_eccentricity(moment, vertical_load, base_width)
    q, bearing_ok = wall_bearing_check(vertical_load, base_width, e, q_ult, required_fos)
    return WallCheckReport(
        sliding_fos=fos,
        sliding_ok=sliding_ok,
        eccentricity=e,
        middle_third_ok=middle_ok,
        bearing_demand=q,
        bearing_ok=bearing_ok,
        required_fos=required_fos,
    )


def audit_linear_claim(
    terms, claimed: float, tolerance: float = AUDIT_TOLERANCE
) -> tuple[float, bool]:
    """Recompute sum(coefficient * factor) and compare against a claim."""
    recomputed = sum(coeff * factor for coeff, factor in terms)
    return recomputed, abs(recomputed - claimed) <= tolerance
