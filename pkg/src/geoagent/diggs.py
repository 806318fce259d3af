"""DIGGS plastic-limit XML: emitter, parser, and curated tag lookup.

Only the plastic-limit trial fragment is produced and consumed; full
schema validation is out of scope. Namespace prefixes are fixed to
``diggs_geo`` and ``gml``; the URI bindings are configurable placeholders
since the source fragment never declares them.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import DiggsParseError, TagNotFoundError, ValidationError

DIGGS_GEO_URI = "http://diggsml.org/schemas/geotechnical"
GML_URI = "http://www.opengis.net/gml/3.2"


@dataclass(frozen=True)
class PlasticLimitTrialSet:
    """Ordered water-content trial values (percent)."""

    trials: tuple[float, ...]
    is_manual: bool = True

    def __post_init__(self):
        if any(v < 0 for v in self.trials):
            raise ValidationError("water content values must be >= 0")


def _format_value(value: float) -> str:
    """Input's decimal precision, minimum one decimal (11.9 -> '11.9',
    50 -> '50.0'); keeps fixtures byte-stable."""
    text = repr(float(value))
    if "e" in text or "E" in text:
        # Scientific notation round-trips exactly; skip the one-decimal rule.
        return text
    if "." not in text:
        text += ".0"
    return text


def emit_plastic_limit_xml(
    trial_set: PlasticLimitTrialSet,
    diggs_uri: str = DIGGS_GEO_URI,
    gml_uri: str = GML_URI,
) -> str:
    """Emit the trial container; trial n carries gml:id "tr{n}" and a
    matching 1-based trialNo."""
    if not trial_set.trials:
        raise ValidationError("cannot emit an empty trial set")
    manual = "true" if trial_set.is_manual else "false"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<diggs_geo:plasticLimitTrial xmlns:diggs_geo="{diggs_uri}" '
        f'xmlns:gml="{gml_uri}">',
    ]
    for n, value in enumerate(trial_set.trials, start=1):
        lines += [
            f'  <diggs_geo:PlasticLimitTrial gml:id="tr{n}">',
            f"    <diggs_geo:trialNo>{n}</diggs_geo:trialNo>",
            f"    <diggs_geo:waterContent>{_format_value(value)}</diggs_geo:waterContent>",
            f"    <diggs_geo:isManual>{manual}</diggs_geo:isManual>",
            "  </diggs_geo:PlasticLimitTrial>",
        ]
    lines.append("</diggs_geo:plasticLimitTrial>")
    return "\n".join(lines) + "\n"


def parse_plastic_limit_xml(document: str) -> PlasticLimitTrialSet:
    """Inverse of emission: recovers values in document order and checks
    gml:id / trialNo consistency."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, column = exc.position
        raise DiggsParseError(
            f"malformed XML at line {line}, column {column}: {exc}",
            line=line,
            column=column,
        ) from exc

    def qualified(uri: str, local: str) -> str:
        return f"{{{uri}}}{local}"

    if root.tag != qualified(DIGGS_GEO_URI, "plasticLimitTrial"):
        # Accept any diggs namespace URI but require the local names.
        if not root.tag.endswith("}plasticLimitTrial"):
            raise DiggsParseError(f"unexpected root element {root.tag!r}")
    diggs_uri = root.tag[1:].split("}", 1)[0] if root.tag.startswith("{") else ""

    values: list[float] = []
    manual_flags: set[bool] = set()
    for position, trial in enumerate(root, start=1):
        if not trial.tag.endswith("}PlasticLimitTrial"):
            raise DiggsParseError(f"unexpected child element {trial.tag!r}")
        gml_id = None
        for key, attr in trial.attrib.items():
            if key.endswith("}id") or key == "id":
                gml_id = attr
        trial_no = trial.findtext(qualified(diggs_uri, "trialNo"), "").strip()
        water = trial.findtext(qualified(diggs_uri, "waterContent"), "").strip()
        manual = trial.findtext(qualified(diggs_uri, "isManual"), "true").strip()
        if not trial_no or not water:
            raise DiggsParseError(f"trial {position} missing trialNo or waterContent")
        if int(trial_no) != position:
            raise DiggsParseError(
                f"trialNo {trial_no} at document position {position} breaks "
                "the 1-based auto-increment"
            )
        if gml_id != f"tr{trial_no}":
            raise DiggsParseError(
                f"gml:id {gml_id!r} does not match trialNo {trial_no}"
            )
        values.append(float(water))
        manual_flags.add(manual == "true")
    if not values:
        raise DiggsParseError("document contains no trials")
    if len(manual_flags) != 1:
        raise DiggsParseError("inconsistent isManual flags across trials")
    return PlasticLimitTrialSet(tuple(values), is_manual=manual_flags.pop())


@dataclass(frozen=True)
class TagPath:
    parent: str
    child: str

    def __str__(self) -> str:
        return f"{self.parent} / {self.child}"


# Closed lookup table; unknown concepts are refused, never invented.
_TAG_TABLE = {
    "plastic limit": TagPath("diggs_geo:plasticLimitTrial", "diggs_geo:waterContent"),
    "plastic limit water content": TagPath(
        "diggs_geo:plasticLimitTrial", "diggs_geo:waterContent"
    ),
    "plastic limit trial number": TagPath(
        "diggs_geo:plasticLimitTrial", "diggs_geo:trialNo"
    ),
    "plastic limit manual flag": TagPath(
        "diggs_geo:plasticLimitTrial", "diggs_geo:isManual"
    ),
}


def tag_for(concept: str) -> TagPath:
    """Qualified parent/child tag path for a supported concept."""
    key = " ".join(concept.lower().split())
    try:
        return _TAG_TABLE[key]
    except KeyError:
        raise TagNotFoundError(
            f"no curated tag for {concept!r}; tags are never fabricated"
        ) from None
