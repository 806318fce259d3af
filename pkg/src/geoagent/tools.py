"""The engineering action tools the agent can invoke.

Each executor takes the raw action-input text plus the long-term memory
store, parses its own named parameters ("Su = 35 kPa" style), falls back
to memory for values it was not given, writes its results back to memory,
and returns the observation text. Tools never raise for recoverable
input problems; they return an explanatory observation instead.
"""

from __future__ import annotations

import re
from pathlib import Path

from .agent import ToolRegistry, ToolSpec
from .geotech import (
    bearing_capacity_undrained,
    interpolate_su,
    max_load,
    shape_factor,
)
from .memory import MemoryStore
from .soil import Foundation, load_profile

_NUM = r"(-?\d+(?:\.\d+)?)"


def _find_number(text: str, *patterns: str) -> float | None:
    for pattern in patterns:
        match = re.search(pattern, text)
        if match:
            return float(match.group(1))
    return None


def _memory_number(memory: MemoryStore, key: str) -> float | None:
    record = memory.get(key)
    if record is None:
        return None
    try:
        return float(record.value)
    except (TypeError, ValueError):
        return None


def _fmt(value: float) -> str:
    return f"{value:g}"


def make_soil_report_tool(base_dir: str | Path | None = None) -> ToolSpec:
    base = Path(base_dir) if base_dir else None

    def execute(raw_input: str, memory: MemoryStore) -> str:
        match = re.search(r"[\w./\\-]+\.(?:pdf|txt|json|prof)", raw_input)
        name = match.group(0) if match else raw_input.strip()
        if not name:
            return "missing input: report file name"
        path = base / name if base else Path(name)
        if not path.exists():
            return f"error: report file not found: {name}"
        profile = load_profile(path)
        requested = raw_input.lower()
        layers = [l for l in profile.layers if l.su is not None or l.su_points]
        preferred = [l for l in layers if l.material.lower() in requested]
        candidates = preferred or layers
        if not candidates:
            return "parameter Su not available: no layer in the report carries undrained strength"
        layer = candidates[0]
        elevation = (layer.top_elevation + layer.bottom_elevation) / 2.0
        su = interpolate_su(profile, elevation)
        memory.put("Su", su, units="kPa", source="SoilReport")
        memory.put("Su_layer", layer.material, source="SoilReport")
        return f"Su = {_fmt(su)} kPa"

    return ToolSpec(
        name="SoilReport",
        description=(
            "Extract soil strength parameters from a soil report. "
            "Input: the report file name. Output: interpolated undrained "
            "strength, e.g. 'Su = 35 kPa'; also stored in long-term memory."
        ),
        executor=execute,
    )


def make_bearing_capacity_tool() -> ToolSpec:
    def execute(raw_input: str, memory: MemoryStore) -> str:
        su = _find_number(raw_input, r"[Ss]u['\"]?\s*[=:]\s*" + _NUM)
        if su is None:
            su = _memory_number(memory, "Su")
        sc = _find_number(raw_input, r"Sc\s*[=:]\s*" + _NUM)
        if sc is None:
            sc = _memory_number(memory, "Sc")
        if su is None:
            return "missing input: Su (give 'Su = <kPa>' or run SoilReport first)"
        if sc is None:
            return "missing input: Sc (give 'Sc = <value>' or run ShapeFactor first)"
        result = bearing_capacity_undrained(su, sc)
        memory.put("q_f", result.q_f, units="kPa", source="BearingCapacity")
        return f"Bearing capacity = {result.q_f:.6g} kPa"

    return ToolSpec(
        name="BearingCapacity",
        description=(
            "Undrained bearing capacity of a foundation. Inputs: undrained "
            "strength 'Su = <kPa>' and shape factor 'Sc = <value>' (either "
            "may come from long-term memory). Output: bearing pressure in kPa."
        ),
        executor=execute,
    )


def make_shape_factor_tool() -> ToolSpec:
    def execute(raw_input: str, memory: MemoryStore) -> str:
        lowered = raw_input.lower()
        for shape in ("circular", "strip", "rectangular"):
            if shape in lowered:
                sc = shape_factor(shape)
                memory.put("Sc", sc, source="ShapeFactor")
                return f"Sc = {_fmt(sc)}"
        return "missing input: foundation shape (circular, strip, or rectangular)"

    return ToolSpec(
        name="ShapeFactor",
        description=(
            "Bearing-capacity shape factor. Input: the foundation shape "
            "(circular, strip, or rectangular). Output: 'Sc = <value>', "
            "also stored in long-term memory."
        ),
        executor=execute,
    )


def make_max_load_tool() -> ToolSpec:
    def execute(raw_input: str, memory: MemoryStore) -> str:
        q_f = _find_number(raw_input, r"q_?f['\"]?\s*[=:]\s*" + _NUM)
        if q_f is None:
            q_f = _memory_number(memory, "q_f")
        if q_f is None:
            return "missing input: bearing capacity (give 'q_f = <kPa>' or run BearingCapacity first)"
        depth = _find_number(
            raw_input,
            _NUM + r"\s*m\s+depth",
            r"depth\s*(?:of|=|:)?\s*" + _NUM,
        )
        if depth is None:
            depth = 0.0
        diameter = _find_number(raw_input, r"(?:diameter|φ|phi)\s*[=:]?\s*" + _NUM)
        if diameter is not None:
            foundation = Foundation("circular", diameter=diameter)
        else:
            width = _find_number(raw_input, r"(?:width|\bB\b)\s*[=:]?\s*" + _NUM)
            length = _find_number(raw_input, r"(?:length|\bL\b)\s*[=:]?\s*" + _NUM)
            if width is None or length is None:
                return (
                    "missing input: foundation dimensions (give 'diameter = <m>' "
                    "or 'width = <m>' and 'length = <m>')"
                )
            foundation = Foundation("rectangular", width=width, length=length)
        load = max_load(q_f, foundation, depth)
        memory.put("max_load", load, units="kN", source="MaxLoad")
        return f"Max. Load = {load!r} kN"

    return ToolSpec(
        name="MaxLoad",
        description=(
            "Maximum load on a soil layer via the 2:1 stress transfer. "
            "Inputs: bearing capacity 'q_f = <kPa>' (or from memory), the "
            "foundation dimension ('diameter = <m>' or width/length), and "
            "the transfer depth '<z> m depth'. Output: total load in kN."
        ),
        executor=execute,
    )


def build_default_registry(report_base_dir: str | Path | None = None) -> ToolRegistry:
    """The four standard tools: SoilReport, BearingCapacity, ShapeFactor, MaxLoad."""
    registry = ToolRegistry()
    registry.register(make_soil_report_tool(report_base_dir))
    registry.register(make_bearing_capacity_tool())
    registry.register(make_shape_factor_tool())
    registry.register(make_max_load_tool())
    return registry
