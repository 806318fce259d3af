"""Deterministic USCS classification.

Decision rules, with the boundary conventions this package fixes:

* coarse-grained iff percent passing sieve 200 is <= 50; gravel branch iff
  gravel% > sand% (gravel = 100 - pass4, sand = pass4 - pass200)
* coarse, fines < 5: well-graded iff Cu > gate and 1 < Cc < 3 (strict);
  the Cu gate is 4 for gravels and 6 for sands
* coarse, 5 <= fines <= 12: dual symbol, gradation prefix (W/P) plus
  A-line suffix (M below, C above, M-C on the line); exactly 5% belongs
  to this band so the three bands partition the axis
* coarse, fines > 12: GM/GC (or SM/SC) by A-line position, dual on it
* fine-grained: L for LL < 50, H for LL >= 50 (equality lands on H);
  C above the A-line, M below, dual symbol on it (CL-ML, MH-CH)

The sand Cu gate follows the usual ASTM convention (6) rather than
mirroring the gravel gate; both gates are module constants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ClassificationError
from .soil import SoilSample, a_line, derive_index_properties

GRAVEL_CU_GATE = 4.0
SAND_CU_GATE = 6.0

SYMBOLS = frozenset(
    {
        "GW", "GP", "GM", "GC", "GM-GC",
        "GW-GM", "GW-GC", "GW-GM-GC", "GP-GM", "GP-GC", "GP-GM-GC",
        "SW", "SP", "SM", "SC", "SM-SC",
        "SW-SM", "SW-SC", "SW-SM-SC", "SP-SM", "SP-SC", "SP-SM-SC",
        "CL", "CH", "ML", "MH", "CL-ML", "MH-CH",
    }
)


@dataclass(frozen=True)
class ClassificationCode:
    """A USCS symbol plus the ordered rule trail that produced it."""

    symbol: str
    rationale: tuple[str, ...]

    def __post_init__(self):
        if self.symbol not in SYMBOLS:
            raise ClassificationError(f"symbol {self.symbol!r} outside the closed set")
        if not self.rationale:
            raise ClassificationError("rationale must be non-empty")


def _require(sample: SoilSample, fields: tuple[str, ...], branch: str):
    missing = tuple(f for f in fields if getattr(sample, f) is None)
    if missing:
        raise ClassificationError(
            f"{branch} branch needs {', '.join(missing)}", missing=missing
        )


def _aline_position(liquid_limit: float, plasticity_index: float) -> str:
    """'above' | 'below' | 'on' the A-line."""
    line = a_line(liquid_limit)
    if plasticity_index > line:
        return "above"
    if plasticity_index < line:
        return "below"
    return "on"


_COARSE_SUFFIX = {"below": "M", "above": "C", "on": "M-C"}


def classify(sample: SoilSample) -> ClassificationCode:
    """Map a sample to exactly one USCS symbol, recording the rule trail."""
    trail = []
    fines = sample.pass_sieve200
    if fines <= 50:
        trail.append(f"pass200={fines:g} <= 50: coarse-grained")
        gravel, sand = sample.gravel_fraction, sample.sand_fraction
        if gravel > sand:
            prefix, gate = "G", GRAVEL_CU_GATE
            trail.append(f"gravel {gravel:g}% > sand {sand:g}%: gravel")
        else:
            prefix, gate = "S", SAND_CU_GATE
            trail.append(f"gravel {gravel:g}% <= sand {sand:g}%: sand")
        return _classify_coarse(sample, fines, prefix, gate, trail)
    trail.append(f"pass200={fines:g} > 50: fine-grained")
    return _classify_fine(sample, trail)


def _well_graded(sample: SoilSample, gate: float, trail: list) -> bool:
    _require(sample, ("d10", "d30", "d60"), "gradation")
    props = derive_index_properties(sample)
    well = props.cu > gate and 1 < props.cc < 3
    trail.append(
        f"Cu={props.cu:g} {'>' if props.cu > gate else '<='} {gate:g}, "
        f"Cc={props.cc:g} {'in' if 1 < props.cc < 3 else 'outside'} (1, 3): "
        f"{'well' if well else 'poorly'} graded"
    )
    return well


def _fines_suffix(sample: SoilSample, trail: list) -> str:
    _require(sample, ("liquid_limit", "plastic_limit"), "plasticity")
    pi = derive_index_properties(sample).plasticity_index
    pos = _aline_position(sample.liquid_limit, pi)
    trail.append(f"PI={pi:g} {pos} A-line={a_line(sample.liquid_limit):g}")
    return _COARSE_SUFFIX[pos]


def _classify_coarse(sample, fines, prefix, gate, trail) -> ClassificationCode:
    if fines < 5:
        well = _well_graded(sample, gate, trail)
        symbol = prefix + ("W" if well else "P")
    elif fines <= 12:
        trail.append(f"5 <= pass200={fines:g} <= 12: borderline dual symbol")
        grad = "W" if _well_graded(sample, gate, trail) else "P"
        suffix = _fines_suffix(sample, trail)
        symbol = f"{prefix}{grad}-" + "-".join(prefix + s for s in suffix.split("-"))
    else:
        trail.append(f"pass200={fines:g} > 12: fines govern")
        suffix = _fines_suffix(sample, trail)
        symbol = "-".join(prefix + s for s in suffix.split("-"))
    trail.append(f"-> {symbol}")
    return ClassificationCode(symbol, tuple(trail))


def _classify_fine(sample, trail) -> ClassificationCode:
    _require(sample, ("liquid_limit", "plastic_limit"), "fine-grained")
    ll = sample.liquid_limit
    pi = derive_index_properties(sample).plasticity_index
    plast = "L" if ll < 50 else "H"
    trail.append(f"LL={ll:g} {'<' if ll < 50 else '>='} 50: {plast}")
    pos = _aline_position(ll, pi)
    trail.append(f"PI={pi:g} {pos} A-line={a_line(ll):g}")
    if pos == "above":
        symbol = "C" + plast
    elif pos == "below":
        symbol = "M" + plast
    else:
        symbol = "CL-ML" if plast == "L" else "MH-CH"
    trail.append(f"-> {symbol}")
    return ClassificationCode(symbol, tuple(trail))


def classify_batch(samples) -> list[ClassificationCode | ClassificationError]:
    """Element-wise classify; per-element failures are returned in place."""
    results: list[ClassificationCode | ClassificationError] = []
    for sample in samples:
        try:
            results.append(classify(sample))
        except ClassificationError as err:
            results.append(err)
    return results
