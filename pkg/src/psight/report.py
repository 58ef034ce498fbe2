"""Shared JSON serialization for assessment results.

The CLI and the HTTP service both emit reports through these functions, so
the two surfaces produce byte-identical output for the same inputs.
"""

from __future__ import annotations

import json

import numpy as np

from .chart.types import ChartDocument
from .effects import DIMENSION_NAMES, ChartFeatureTable, extract_features
from .errors import EmptyScope, UnknownElementId
from .model import PerceptionModel
from .patterns import (
    PatternReport,
    SalienceScore,
    contributing_dimensions,
    identify_patterns,
    salience,
    summarize,
)

HISTOGRAM_BINS = 10


def scope_elements(doc: ChartDocument,
                   excluded: list[str] | None = None) -> list[str]:
    """Document-ordered element ids minus the excluded set."""
    excluded_set = set(excluded or ())
    for eid in excluded_set:
        if not doc.has_element(eid):
            raise UnknownElementId(f"no element with id {eid!r}")
    scope = [e.id for e in doc.elements if e.id not in excluded_set]
    if not scope:
        raise EmptyScope("every element is excluded from the scope")
    return scope


def salience_to_dict(score: SalienceScore | None) -> dict | None:
    if score is None:
        return None
    return {
        "ratio": score.ratio,
        "display": score.display,
        "intra_avg": score.intra_avg,
        "inter_avg": score.inter_avg,
    }


def report_to_dict(report: PatternReport, scope: list[str],
                   revision: int = 0) -> dict:
    return {
        "revision": revision,
        "scope": list(scope),
        "patterns": [
            {
                "elements": sorted(p.group.element_ids),
                "origin": p.group.origin,
                "salience": salience_to_dict(p.salience),
                "contributing_dims": list(p.contributing_dims),
                "type_counts": dict(sorted(p.type_counts.items())),
            }
            for p in report.patterns
        ],
        "core_patterns": [sorted(core) for core in report.core_patterns],
        "similar_links": [list(link) for link in report.similar_links],
    }


def assess(model: PerceptionModel, doc: ChartDocument,
           excluded: list[str] | None = None,
           revision: int = 0) -> dict:
    """Run the identify/score/summarize pipeline and return the report dict."""
    scope = scope_elements(doc, excluded)
    features = extract_features(doc, scope)
    groups = identify_patterns(model, features)
    kinds = {e.id: e.kind for e in doc.elements}
    report = summarize(model, features, groups, kinds)
    return report_to_dict(report, scope, revision)


def serialize_json(payload: dict) -> bytes:
    """Canonical JSON bytes shared by the CLI and the service."""
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def histogram(values: np.ndarray, bins: int = HISTOGRAM_BINS) -> dict:
    counts, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    return {"bin_edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts]}


def effect_histograms(features: ChartFeatureTable,
                      selection: list[str] | None = None) -> dict:
    """Per-dimension histograms of normalized values, with the selection's
    share and in-selection variance when a selection is given."""
    out: dict = {"dimensions": {}}
    rows = None
    if selection:
        index = {eid: i for i, eid in enumerate(features.element_ids)}
        rows = [index[eid] for eid in selection if eid in index]
    for d, name in enumerate(DIMENSION_NAMES):
        entry = {"all": histogram(features.values[:, d])}
        if rows:
            selected = features.values[rows, d]
            entry["selection"] = histogram(selected)
            entry["selection_variance"] = float(selected.var())
        out["dimensions"][name] = entry
    return out


def selection_to_dict(model: PerceptionModel, features: ChartFeatureTable,
                      selection: list[str], revision: int = 0) -> dict:
    group = frozenset(selection)
    score = salience(model, group, features)
    return {
        "revision": revision,
        "elements": sorted(group),
        "salience": salience_to_dict(score),
        "contributing_dims": list(contributing_dimensions(model, group, features))
        if len(group) >= 2 else [],
        "effect_histograms": effect_histograms(features, selection),
    }


def suggestions_to_dict(suggestions: list, revision: int = 0) -> dict:
    return {
        "revision": revision,
        "suggestions": [
            {
                "suggestion_id": i,
                "kind": s.kind,
                "dim": s.dim,
                "value": s.proposed_value,
                "code_expression": s.code_expression,
                "gain": s.predicted_salience_gain,
                "target_group": list(s.target_group),
                "conflicts_checked": s.conflicts_checked,
                "edit_commands": [edit_command_to_dict(c) for c in s.edit_commands],
            }
            for i, s in enumerate(suggestions)
        ],
    }


def edit_command_to_dict(command) -> dict:
    from .chart.edit import BatchShift, InsertAnnotation, SetAttribute

    if isinstance(command, SetAttribute):
        return {"type": "set_attribute", "element_id": command.element_id,
                "name": command.name, "value": command.value}
    if isinstance(command, BatchShift):
        return {"type": "batch_shift", "element_ids": list(command.element_ids),
                "dx": command.dx, "dy": command.dy}
    if isinstance(command, InsertAnnotation):
        return {"type": "insert_annotation", "kind": command.kind,
                "geometry": _geometry_to_json(command.geometry),
                "style": dict(command.style)}
    raise TypeError(f"unsupported command {type(command).__name__}")


def _geometry_to_json(geometry: dict) -> dict:
    out = {}
    for key, value in geometry.items():
        if key == "points":
            out[key] = [[float(x), float(y)] for x, y in value]
        else:
            out[key] = float(value)
    return out


def edit_command_from_dict(data: dict):
    from .chart.edit import BatchShift, InsertAnnotation, SetAttribute
    from .errors import InvalidAttributeValue

    kind = data.get("type")
    try:
        if kind == "set_attribute":
            return SetAttribute(data["element_id"], data["name"], str(data["value"]))
        if kind == "batch_shift":
            return BatchShift(tuple(data["element_ids"]),
                              float(data["dx"]), float(data["dy"]))
        if kind == "insert_annotation":
            geometry = dict(data["geometry"])
            if "points" in geometry:
                geometry["points"] = [tuple(p) for p in geometry["points"]]
            return InsertAnnotation(data["kind"], geometry,
                                    dict(data.get("style", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidAttributeValue(f"bad edit command: {exc}") from exc
    raise InvalidAttributeValue(f"unknown edit command type {kind!r}")
