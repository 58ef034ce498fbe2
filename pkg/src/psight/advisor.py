"""Design suggestions that strengthen a selected group's salience.

The advisor summarizes how the chart currently uses each visual-effect
channel, then proposes three kinds of edits: recruiting an unused channel
for the group (candidate values from small grids), consolidating or
contrasting an already-used channel, and overlay annotations. Every
value-changing suggestion is scored by actually applying the edit to a copy
of the document and re-running the full feature/salience pipeline, so the
predicted gain is the real gain by construction.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .chart.color import hsl_to_rgb, rgb_literal, rgb_to_hsl
from .chart.edit import BatchShift, EditCommand, InsertAnnotation, SetAttribute, apply_edit
from .chart.parse import blended_color
from .chart.types import ChartDocument
from .effects import (
    GAP_TOLERANCE_RATIO,
    ChartFeatureTable,
    build_relationship_matrices,
    extract_features,
)
from .errors import EmptyScope, StaleSuggestion, WholeChartGroup
from .model import PerceptionModel
from .patterns import salience

VALUE_TOLERANCE = 1e-6

# normalized in-group variance above this marks a channel for consolidation
HIGH_VARIANCE = 0.05
MAX_VARIANCE = 0.25

# a used channel with at most this many distinct values is low-diversity
LOW_DIVERSITY_MAX = 3

HUE_GRID = (0.0, 120.0, 240.0)
LEVEL_GRID = (0.25, 0.5, 0.75)       # lightness and saturation candidates
STROKE_WIDTH_GRID = (1.0, 2.0, 3.0)

# visual-effect channels: fused hue (sin+cos) plus the remaining dimensions
CHANNELS: tuple[tuple[str, tuple[int, ...]], ...] = (
    ("type_code", (0,)),
    ("fill_hue", (1, 2)),
    ("fill_saturation", (3,)),
    ("fill_lightness", (4,)),
    ("stroke_hue", (5, 6)),
    ("stroke_saturation", (7,)),
    ("stroke_lightness", (8,)),
    ("stroke_width", (9,)),
    ("bbox_width", (10,)),
    ("bbox_height", (11,)),
    ("area", (12,)),
    ("centroid_x", (13,)),
    ("centroid_y", (14,)),
    ("bbox_left", (15,)),
    ("bbox_right", (16,)),
    ("bbox_top", (17,)),
    ("bbox_bottom", (18,)),
    ("mds_contact_1", (19,)),
    ("mds_contact_2", (20,)),
    ("mds_region_1", (21,)),
    ("mds_region_2", (22,)),
)

CHANNEL_DIMS = dict(CHANNELS)

# channels that cannot vary independently and so must not be recruited while
# a geometric partner is already carrying information
CONFLICT_RULES: tuple[frozenset[str], ...] = (
    frozenset({"bbox_height", "bbox_top", "bbox_bottom"}),
    frozenset({"bbox_width", "bbox_left", "bbox_right"}),
    frozenset({"area", "bbox_width", "bbox_height"}),
)

# channels a grid of candidate values exists for
_GRIDS: dict[str, tuple[float, ...]] = {
    "fill_hue": HUE_GRID,
    "fill_saturation": LEVEL_GRID,
    "fill_lightness": LEVEL_GRID,
    "stroke_hue": HUE_GRID,
    "stroke_saturation": LEVEL_GRID,
    "stroke_lightness": LEVEL_GRID,
    "stroke_width": STROKE_WIDTH_GRID,
}

# channels where a modal value can be applied as an aligning shift
_SHIFT_CHANNELS = {
    "centroid_x": ("x", 13), "centroid_y": ("y", 14),
    "bbox_left": ("x", 15), "bbox_right": ("x", 16),
    "bbox_top": ("y", 17), "bbox_bottom": ("y", 18),
}


@dataclass(frozen=True)
class DimensionUsage:
    dim: str
    distinct_values: int
    in_use: bool
    low_diversity: bool


@dataclass(frozen=True)
class Suggestion:
    kind: str  # "add_dimension" | "modify_effect" | "add_annotation"
    target_group: tuple[str, ...]
    dim: str | None
    proposed_value: float | str | None
    code_expression: str
    predicted_salience_gain: float
    conflicts_checked: bool
    edit_commands: tuple[EditCommand, ...]
    source_fingerprint: str
    scope: tuple[str, ...] = field(default=())


def document_fingerprint(doc: ChartDocument) -> str:
    return hashlib.sha256(doc.source_text.encode("utf-8")).hexdigest()


def _distinct_count(rows: np.ndarray) -> int:
    """Distinct value count (rows may be multi-column) within tolerance."""
    if len(rows) == 0:
        return 0
    ordered = rows[np.lexsort(rows.T[::-1])]
    count = 1
    for i in range(1, len(ordered)):
        if np.any(np.abs(ordered[i] - ordered[i - 1]) > VALUE_TOLERANCE):
            count += 1
    return count


def _usage_from_table(table: ChartFeatureTable) -> list[DimensionUsage]:
    out = []
    for name, dims in CHANNELS:
        cols = list(dims)
        present = table.mask[:, cols].all(axis=1)
        distinct = _distinct_count(table.raw[np.ix_(np.nonzero(present)[0], cols)])
        out.append(DimensionUsage(
            dim=name, distinct_values=distinct, in_use=distinct > 1,
            low_diversity=1 < distinct <= LOW_DIVERSITY_MAX))
    out.sort(key=lambda u: (-u.distinct_values, u.dim))
    return out


def usage_summary(doc: ChartDocument,
                  scope: list[str] | None = None) -> list[DimensionUsage]:
    """Distinct-value counts per channel over the scoped elements, most-used
    first."""
    if scope is not None and not scope:
        raise EmptyScope("usage summary needs a nonempty scope")
    return _usage_from_table(extract_features(doc, scope))


def passes_conflict_rules(dim: str, usage: dict[str, DimensionUsage]) -> bool:
    """A channel may be recruited only if no other member of any conflict
    set it belongs to is already in use."""
    for rule in CONFLICT_RULES:
        if dim in rule:
            for partner in rule - {dim}:
                if usage[partner].in_use:
                    return False
    return True


def _group_modal_raw(table: ChartFeatureTable, group_rows: list[int],
                     dims: tuple[int, ...]) -> np.ndarray | None:
    """Most common raw value tuple within the group (ties -> smallest)."""
    rows = table.raw[np.ix_(group_rows, list(dims))]
    present = table.mask[np.ix_(group_rows, list(dims))].all(axis=1)
    rows = rows[present]
    if len(rows) == 0:
        return None
    clusters: list[tuple[np.ndarray, int]] = []
    for row in rows:
        for i, (value, count) in enumerate(clusters):
            if np.all(np.abs(row - value) <= VALUE_TOLERANCE):
                clusters[i] = (value, count + 1)
                break
        else:
            clusters.append((row, 1))
    clusters.sort(key=lambda c: (-c[1], tuple(c[0])))
    return clusters[0][0]


def _channel_variance(table: ChartFeatureTable, group_rows: list[int],
                      dims: tuple[int, ...]) -> float:
    """Max normalized in-group variance across the channel's dimensions."""
    values = table.values[np.ix_(group_rows, list(dims))]
    return float(values.var(axis=0).max() / MAX_VARIANCE)


class _Simulator:
    """Applies candidate edits and re-scores the group with the same scope."""

    def __init__(self, model: PerceptionModel, doc: ChartDocument,
                 features: ChartFeatureTable, group: frozenset[str]):
        self.model = model
        self.doc = doc
        self.scope = list(features.element_ids)
        self.group = group
        self.base = salience(model, group, features).display

    def gain(self, commands: list[EditCommand]) -> float:
        edited = apply_edit(self.doc, commands)
        table = extract_features(edited, self.scope)
        return salience(self.model, self.group, table).display - self.base


def _color_commands(doc: ChartDocument, group_ids: list[str], channel: str,
                    value: float) -> tuple[list[EditCommand], str] | None:
    """Edits that set one HSL component (or stroke width) uniformly across
    the group, preserving each element's other components."""
    slot = "fill" if channel.startswith("fill") else "stroke"
    commands: list[EditCommand] = []
    literals: set[str] = set()
    for eid in group_ids:
        element = doc.element(eid)
        paint = element.style.fill if slot == "fill" else element.style.stroke
        if slot == "fill" and paint is None:
            return None  # cannot recolor a fill that does not exist
        if paint is None:
            base = element.style.fill
            h, s, l = rgb_to_hsl(blended_color(element, doc, "fill")) \
                if base is not None else (0.0, 0.0, 0.0)
        else:
            h, s, l = rgb_to_hsl(blended_color(element, doc, slot))
        if channel.endswith("hue"):
            h = value
        elif channel.endswith("saturation"):
            s = value
        else:
            l = value
        literal = rgb_literal(hsl_to_rgb(h, s, l))
        literals.add(literal)
        commands.append(SetAttribute(eid, slot, literal))
    attr = slot
    if len(literals) == 1:
        expression = f"{attr} → {next(iter(literals))}"
    else:
        unit = "°" if channel.endswith("hue") else ""
        expression = f"{attr} → {channel.split('_', 1)[1]} {value:g}{unit} (per element)"
    return commands, expression


def _stroke_width_commands(doc: ChartDocument, group_ids: list[str],
                           value: float) -> tuple[list[EditCommand], str]:
    commands: list[EditCommand] = []
    for eid in group_ids:
        element = doc.element(eid)
        commands.append(SetAttribute(eid, "stroke-width", f"{value:g}"))
        if element.style.stroke is None:
            # a width is invisible without a paint; derive one from the fill
            if element.style.fill is not None:
                h, s, l = rgb_to_hsl(blended_color(element, doc, "fill"))
                literal = rgb_literal(hsl_to_rgb(h, s, max(0.0, l - 0.25)))
            else:
                literal = "rgb(0, 0, 0)"
            commands.append(SetAttribute(eid, "stroke", literal))
    return commands, f"stroke-width → {value:g}"


def _shift_commands(doc: ChartDocument, features: ChartFeatureTable,
                    group_ids: list[str], channel: str,
                    target: float) -> tuple[list[EditCommand], str]:
    axis, dim = _SHIFT_CHANNELS[channel]
    index = {eid: i for i, eid in enumerate(features.element_ids)}
    commands: list[EditCommand] = []
    for eid in group_ids:
        current = features.raw[index[eid], dim]
        delta = target - current
        if abs(delta) <= VALUE_TOLERANCE:
            continue
        dx, dy = (delta, 0.0) if axis == "x" else (0.0, delta)
        commands.append(BatchShift((eid,), dx, dy))
    return commands, f"transform → align {channel} at {target:g}"


def _candidate_edits(doc: ChartDocument, features: ChartFeatureTable,
                     group_ids: list[str], channel: str, value: float,
                     ) -> tuple[list[EditCommand], str] | None:
    if channel == "stroke_width":
        return _stroke_width_commands(doc, group_ids, value)
    if channel in _GRIDS:
        return _color_commands(doc, group_ids, channel, value)
    if channel in _SHIFT_CHANNELS:
        return _shift_commands(doc, features, group_ids, channel, value)
    return None


def _group_current_value(table: ChartFeatureTable, group_rows: list[int],
                         channel: str) -> np.ndarray | None:
    return _group_modal_raw(table, group_rows, CHANNEL_DIMS[channel])


def _grid_value_matches(channel: str, value: float,
                        current: np.ndarray | None) -> bool:
    """Is the candidate effectively the value the group already has?"""
    if current is None:
        return False
    if channel.endswith("hue"):
        sin_c, cos_c = np.sin(np.radians(value)), np.cos(np.radians(value))
        return bool(np.all(np.abs(current - (sin_c, cos_c)) <= 1e-3))
    return bool(abs(float(current[0]) - value) <= 1e-3)


def _annotation_suggestion(doc: ChartDocument, features: ChartFeatureTable,
                           group_ids: list[str], fingerprint: str,
                           scope: tuple[str, ...]) -> Suggestion:
    """Surrounding rect for contact-connected groups, else a connecting
    polyline through the member centroids."""
    elements = [doc.element(eid) for eid in group_ids]
    contact = build_relationship_matrices(doc, elements).contact
    n_components, _ = connected_components(contact > 0, directed=False)
    pad = GAP_TOLERANCE_RATIO * doc.canvas_diagonal
    style = {"stroke": "rgb(51, 51, 51)", "stroke-width": "1",
             "stroke-dasharray": "4 2"}
    if n_components == 1:
        left = min(e.bbox.left for e in elements) - pad
        right = max(e.bbox.right for e in elements) + pad
        top = min(e.bbox.top for e in elements) - pad
        bottom = max(e.bbox.bottom for e in elements) + pad
        command = InsertAnnotation("rect", {
            "x": left, "y": top, "width": right - left, "height": bottom - top,
        }, style)
        expression = "annotation → surrounding rect"
        value = "surrounding_rect"
    else:
        centroids = sorted(((e.bbox.cx, e.bbox.cy) for e in elements))
        command = InsertAnnotation("polyline", {"points": centroids}, style)
        expression = "annotation → connecting polyline"
        value = "connecting_polyline"
    return Suggestion(
        kind="add_annotation", target_group=tuple(sorted(group_ids)),
        dim=None, proposed_value=value, code_expression=expression,
        predicted_salience_gain=0.0, conflicts_checked=False,
        edit_commands=(command,), source_fingerprint=fingerprint, scope=scope)


def generate_suggestions(model: PerceptionModel, doc: ChartDocument,
                         features: ChartFeatureTable,
                         group: frozenset[str] | set[str]) -> list[Suggestion]:
    """Ranked suggestions for raising the group's salience.

    Unused channels are recruited over candidate grids; used channels are
    consolidated to the modal value when the group is internally inconsistent
    or contrasted with an alternative grid value when the channel carries
    little diversity. Grid candidates survive only with positive simulated
    gain, the best value per channel. An annotation proposal is appended
    last.
    """
    group = frozenset(group)
    if not group:
        raise EmptyScope("suggestion target group is empty")
    scoped = set(features.element_ids)
    if group >= scoped:
        raise WholeChartGroup("group covers the whole scope; nothing to contrast against")
    group_ids = [eid for eid in features.element_ids if eid in group]
    group_rows = [i for i, eid in enumerate(features.element_ids) if eid in group]

    usage = {u.dim: u for u in _usage_from_table(features)}
    simulator = _Simulator(model, doc, features, group)
    fingerprint = document_fingerprint(doc)
    scope = tuple(features.element_ids)
    ranked: list[Suggestion] = []

    def best_grid_suggestion(kind: str, channel: str,
                             skip_current: bool) -> Suggestion | None:
        current = _group_current_value(features, group_rows, channel)
        best: Suggestion | None = None
        for value in _GRIDS[channel]:
            if skip_current and _grid_value_matches(channel, value, current):
                continue
            built = _candidate_edits(doc, features, group_ids, channel, value)
            if built is None:
                continue
            commands, expression = built
            gain = simulator.gain(commands)
            if gain <= 0:
                continue
            if best is None or gain > best.predicted_salience_gain + 1e-12:
                best = Suggestion(
                    kind=kind, target_group=tuple(sorted(group_ids)),
                    dim=channel, proposed_value=value,
                    code_expression=expression, predicted_salience_gain=gain,
                    conflicts_checked=True, edit_commands=tuple(commands),
                    source_fingerprint=fingerprint, scope=scope)
        return best

    for name, _dims in CHANNELS:
        info = usage[name]
        if not info.in_use:
            # (a) recruit an unused channel, if its partners allow it
            if name in _GRIDS and passes_conflict_rules(name, usage):
                suggestion = best_grid_suggestion("add_dimension", name,
                                                  skip_current=True)
                if suggestion is not None:
                    ranked.append(suggestion)
            continue
        variance = _channel_variance(features, group_rows, CHANNEL_DIMS[name])
        if variance > HIGH_VARIANCE:
            # (b) consolidate an inconsistent channel at the modal value
            modal = _group_modal_raw(features, group_rows, CHANNEL_DIMS[name])
            if modal is None:
                continue
            if name in _SHIFT_CHANNELS:
                target = float(modal[0])
                commands, expression = _shift_commands(
                    doc, features, group_ids, name, target)
                value: float | str = target
            elif name == "stroke_width":
                target = float(modal[0])
                commands, expression = _stroke_width_commands(doc, group_ids, target)
                value = target
            elif name in _GRIDS:
                h = float(np.degrees(np.arctan2(modal[0], modal[1]))) % 360.0 \
                    if name.endswith("hue") else 0.0
                target = h if name.endswith("hue") else float(modal[0])
                built = _color_commands(doc, group_ids, name, target)
                if built is None:
                    continue
                commands, expression = built
                value = target
            else:
                continue
            if not commands:
                continue
            ranked.append(Suggestion(
                kind="modify_effect", target_group=tuple(sorted(group_ids)),
                dim=name, proposed_value=value, code_expression=expression,
                predicted_salience_gain=simulator.gain(commands),
                conflicts_checked=True, edit_commands=tuple(commands),
                source_fingerprint=fingerprint, scope=scope))
        elif info.low_diversity and name in _GRIDS:
            # (b) contrast: move the group off a value shared with others
            suggestion = best_grid_suggestion("modify_effect", name,
                                              skip_current=True)
            if suggestion is not None:
                ranked.append(suggestion)

    ranked.sort(key=lambda s: (-s.predicted_salience_gain, s.dim or "",
                               str(s.proposed_value)))
    ranked.append(_annotation_suggestion(doc, features, group_ids,
                                         fingerprint, scope))
    return ranked


def apply_suggestion(doc: ChartDocument, suggestion: Suggestion) -> ChartDocument:
    """Apply a previously generated suggestion to the same document revision."""
    if document_fingerprint(doc) != suggestion.source_fingerprint:
        raise StaleSuggestion("document changed since the suggestion was generated")
    return apply_edit(doc, list(suggestion.edit_commands))
