"""SVG parsing into a flat list of graphical elements.

The parser walks the XML tree once, flattening ancestor transforms into each
leaf's geometry and merging presentation attributes, inline style and
inherited group declarations into a ResolvedStyle. Container groups are not
elements; defs/metadata subtrees never render and are skipped.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from ..errors import MalformedSvg, NoCanvas
from . import transform as tf
from .color import RGBA, composite_over, parse_color
from .pathdata import parse_path_data, path_is_closed
from .types import (
    CLOSED_KINDS,
    BoundingBox,
    ChartDocument,
    GraphicalElement,
    ResolvedStyle,
)

SVG_NS = "http://www.w3.org/2000/svg"

# text bbox heuristic: width = CHAR_WIDTH_RATIO * font-size * char count,
# height = font-size
TEXT_CHAR_WIDTH_RATIO = 0.6
DEFAULT_FONT_SIZE = 16.0

# background rect must cover at least this share of the canvas
BACKGROUND_COVERAGE = 0.95

_RENDERABLE = {"rect", "circle", "ellipse", "line", "polyline", "polygon",
               "path", "text", "image"}
_CONTAINERS = {"svg", "g", "a"}
_SKIPPED = {"defs", "symbol", "marker", "clipPath", "mask", "pattern", "style",
            "script", "metadata", "title", "desc", "linearGradient",
            "radialGradient", "filter", "animate", "animateTransform", "set"}

_STYLE_PROPS = ("fill", "stroke", "stroke-width", "opacity", "fill-opacity",
                "stroke-opacity", "font-size", "display")

_NUM_PREFIX_RE = re.compile(r"^[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_POINTS_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_length(text: str | None) -> float | None:
    """Parse an SVG length, accepting a bare number or a px suffix."""
    if text is None:
        return None
    text = text.strip()
    if text.endswith("px"):
        text = text[:-2].strip()
    m = _NUM_PREFIX_RE.match(text)
    if not m or m.group(0) != text:
        return None
    try:
        return float(text)
    except ValueError:
        return None


def _parse_style_attr(text: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    if not text:
        return out
    for part in text.split(";"):
        if ":" not in part:
            continue
        key, _, value = part.partition(":")
        out[key.strip()] = value.strip()
    return out


@dataclass
class _NodeInfo:
    """Bookkeeping for one renderable leaf found during traversal."""

    node: ET.Element
    path_id: str
    explicit_id: str | None
    transform: tf.Affine         # ancestors composed with the node's own
    parent_transform: tf.Affine  # ancestors only
    declared: dict[str, str]     # merged declared style props, nearest wins
    opacity: float               # product of ancestor and own opacity
    display_none: bool


@dataclass
class _Walker:
    """Single-pass traversal shared by the parser and the editor (the editor
    re-walks the tree to map element ids back onto XML nodes)."""

    warnings: list[str] = field(default_factory=list)
    infos: list[_NodeInfo] = field(default_factory=list)

    def walk(self, root: ET.Element, base_transform: tf.Affine) -> None:
        self._visit(root, "/svg", base_transform, {}, 1.0, False)

    def _declarations(self, node: ET.Element) -> tuple[dict[str, str], float | None]:
        """Collect declared style props on one node; returns (props, opacity)."""
        decl: dict[str, str] = {}
        for prop in _STYLE_PROPS:
            if prop == "opacity":
                continue
            value = node.get(prop)
            if value is not None:
                decl[prop] = value
        style = _parse_style_attr(node.get("style"))
        for prop in _STYLE_PROPS:
            if prop == "opacity":
                continue
            if prop in style:
                decl[prop] = style[prop]
        opacity_text = style.get("opacity", node.get("opacity"))
        opacity = None
        if opacity_text is not None:
            parsed = _parse_length(opacity_text)
            if parsed is not None:
                opacity = max(0.0, min(1.0, parsed))
        if node.get("class"):
            self.warnings.append(
                f"CSS class on <{local_name(node.tag)}> ignored (stylesheets unsupported)")
        return decl, opacity

    def _visit(self, node: ET.Element, path: str, current: tf.Affine,
               inherited: dict[str, str], opacity: float, display_none: bool) -> None:
        name = local_name(node.tag)
        if name in _SKIPPED:
            return
        decl, own_opacity = self._declarations(node)
        if own_opacity is not None:
            opacity *= own_opacity
        merged = {**inherited, **decl}
        if merged.get("display", "").strip() == "none":
            display_none = True
        node_tf, tf_warnings = tf.parse_transform(node.get("transform"))
        self.warnings.extend(tf_warnings)
        parent = current
        current = tf.compose(current, node_tf)

        if name in _RENDERABLE or (name not in _CONTAINERS and path != "/svg"):
            self.infos.append(_NodeInfo(
                node=node, path_id=path, explicit_id=node.get("id"),
                transform=current, parent_transform=parent, declared=merged,
                opacity=opacity, display_none=display_none))
            return

        counters: dict[str, int] = {}
        for child in node:
            child_name = local_name(child.tag)
            if child_name in _SKIPPED:
                continue
            counters[child_name] = counters.get(child_name, 0) + 1
            child_path = f"{path}/{child_name}[{counters[child_name]}]"
            self._visit(child, child_path, current, merged, opacity, display_none)


def assign_ids(infos: list[_NodeInfo], warnings: list[str]) -> list[str]:
    """Explicit ids win when unique; collisions fall back to the path id."""
    seen: dict[str, int] = {}
    for info in infos:
        if info.explicit_id:
            seen[info.explicit_id] = seen.get(info.explicit_id, 0) + 1
    ids: list[str] = []
    used: set[str] = set()
    for info in infos:
        eid = info.explicit_id
        if eid and seen[eid] == 1 and eid not in used:
            ids.append(eid)
            used.add(eid)
        else:
            if eid and seen.get(eid, 0) > 1:
                warnings.append(f"duplicate id {eid!r}; generated path id used")
            ids.append(info.path_id)
            used.add(info.path_id)
    return ids


def _collect_gradients(root: ET.Element) -> dict[str, RGBA]:
    """Map gradient ids to their average stop color."""
    grads: dict[str, RGBA] = {}
    for node in root.iter():
        if local_name(node.tag) not in ("linearGradient", "radialGradient"):
            continue
        gid = node.get("id")
        if not gid:
            continue
        stops: list[RGBA] = []
        for stop in node:
            if local_name(stop.tag) != "stop":
                continue
            style = _parse_style_attr(stop.get("style"))
            color_text = style.get("stop-color", stop.get("stop-color", "black"))
            opacity_text = style.get("stop-opacity", stop.get("stop-opacity"))
            try:
                rgba = parse_color(color_text)
            except ValueError:
                rgba = (0, 0, 0, 1.0)
            if rgba is None:
                rgba = (0, 0, 0, 1.0)
            alpha = rgba[3]
            if opacity_text is not None:
                parsed = _parse_length(opacity_text)
                if parsed is not None:
                    alpha *= max(0.0, min(1.0, parsed))
            stops.append((rgba[0], rgba[1], rgba[2], alpha))
        if stops:
            n = len(stops)
            grads[gid] = (
                int(round(sum(s[0] for s in stops) / n)),
                int(round(sum(s[1] for s in stops) / n)),
                int(round(sum(s[2] for s in stops) / n)),
                sum(s[3] for s in stops) / n,
            )
    return grads


_URL_RE = re.compile(r"url\(\s*#([^)\s]+)\s*\)")


def _resolve_paint(text: str | None, default: RGBA | None,
                   gradients: dict[str, RGBA], warnings: list[str],
                   what: str) -> RGBA | None:
    if text is None:
        return default
    text = text.strip()
    if text in ("inherit", ""):
        return default
    if text == "currentColor":
        warnings.append(f"currentColor in {what} unsupported; default used")
        return default
    m = _URL_RE.match(text)
    if m:
        gid = m.group(1)
        if gid in gradients:
            return gradients[gid]
        warnings.append(f"paint reference url(#{gid}) unresolved; default used")
        return default
    try:
        return parse_color(text)
    except ValueError:
        warnings.append(f"unparseable {what} value {text!r}; default used")
        return default


def _resolve_number(text: str | None, default: float) -> float:
    parsed = _parse_length(text)
    return default if parsed is None else parsed


def _text_content(node: ET.Element) -> str:
    raw = "".join(node.itertext())
    return " ".join(raw.split())


def _ellipse_bbox(center: tuple[float, float], rx: float, ry: float,
                  t: tf.Affine) -> BoundingBox:
    a, b, c, d, _, _ = t
    hw = ((a * rx) ** 2 + (c * ry) ** 2) ** 0.5
    hh = ((b * rx) ** 2 + (d * ry) ** 2) ** 0.5
    cx, cy = center
    return BoundingBox(cx - hw, cx + hw, cy - hh, cy + hh)


def _build_element(info: _NodeInfo, element_id: str,
                   gradients: dict[str, RGBA], warnings: list[str]) -> GraphicalElement:
    node, t = info.node, info.transform
    name = local_name(node.tag)
    kind = name if name in _RENDERABLE else "other"
    geometry: dict = {}
    closed = kind in CLOSED_KINDS
    font_size: float | None = None

    def pt(x: float, y: float) -> tuple[float, float]:
        return tf.apply(t, x, y)

    if kind == "rect" or kind == "image":
        x = _resolve_number(node.get("x"), 0.0)
        y = _resolve_number(node.get("y"), 0.0)
        w = _resolve_number(node.get("width"), 0.0)
        h = _resolve_number(node.get("height"), 0.0)
        corners = [pt(x, y), pt(x + w, y), pt(x + w, y + h), pt(x, y + h)]
        geometry = {"corners": corners}
        bbox = BoundingBox.from_points(corners)
    elif kind == "circle":
        cx = _resolve_number(node.get("cx"), 0.0)
        cy = _resolve_number(node.get("cy"), 0.0)
        r = _resolve_number(node.get("r"), 0.0)
        center = pt(cx, cy)
        geometry = {"center": center, "rx": r, "ry": r}
        bbox = _ellipse_bbox(center, r, r, t)
    elif kind == "ellipse":
        cx = _resolve_number(node.get("cx"), 0.0)
        cy = _resolve_number(node.get("cy"), 0.0)
        rx = _resolve_number(node.get("rx"), 0.0)
        ry = _resolve_number(node.get("ry"), 0.0)
        center = pt(cx, cy)
        geometry = {"center": center, "rx": rx, "ry": ry}
        bbox = _ellipse_bbox(center, rx, ry, t)
    elif kind == "line":
        p1 = pt(_resolve_number(node.get("x1"), 0.0), _resolve_number(node.get("y1"), 0.0))
        p2 = pt(_resolve_number(node.get("x2"), 0.0), _resolve_number(node.get("y2"), 0.0))
        geometry = {"points": [p1, p2]}
        bbox = BoundingBox.from_points([p1, p2])
    elif kind in ("polyline", "polygon"):
        nums = [float(v) for v in _POINTS_RE.findall(node.get("points", ""))]
        pts = [pt(nums[i], nums[i + 1]) for i in range(0, len(nums) - 1, 2)]
        if not pts:
            pts = [pt(0.0, 0.0)]
        geometry = {"points": pts}
        bbox = BoundingBox.from_points(pts)
    elif kind == "path":
        subpaths, path_warnings = parse_path_data(node.get("d", ""))
        warnings.extend(path_warnings)
        closed = path_is_closed(subpaths)
        tr_subpaths = [{"points": [pt(x, y) for x, y in sp.points], "closed": sp.closed}
                       for sp in subpaths]
        all_points = [p for sp in tr_subpaths for p in sp["points"]]
        if not all_points:
            all_points = [pt(0.0, 0.0)]
        geometry = {"subpaths": tr_subpaths}
        bbox = BoundingBox.from_points(all_points)
    elif kind == "text":
        x = _resolve_number(node.get("x"), 0.0)
        y = _resolve_number(node.get("y"), 0.0)
        font_size = _resolve_number(info.declared.get("font-size"), DEFAULT_FONT_SIZE)
        content = _text_content(node)
        w = TEXT_CHAR_WIDTH_RATIO * font_size * len(content)
        corners = [pt(x, y - font_size), pt(x + w, y - font_size), pt(x + w, y), pt(x, y)]
        geometry = {"anchor": pt(x, y), "corners": corners, "text": content}
        bbox = BoundingBox.from_points(corners)
    else:
        # unknown kind: bbox from whatever coordinate attributes exist
        x = _resolve_number(node.get("x"), 0.0)
        y = _resolve_number(node.get("y"), 0.0)
        w = _resolve_number(node.get("width"), 0.0)
        h = _resolve_number(node.get("height"), 0.0)
        corners = [pt(x, y), pt(x + w, y + h)]
        geometry = {"corners": corners}
        bbox = BoundingBox.from_points(corners)
        closed = False

    default_fill: RGBA | None = None if kind == "line" else (0, 0, 0, 1.0)
    fill = _resolve_paint(info.declared.get("fill"), default_fill, gradients,
                          warnings, f"fill of {element_id}")
    stroke = _resolve_paint(info.declared.get("stroke"), None, gradients,
                            warnings, f"stroke of {element_id}")
    fill_opacity = _resolve_number(info.declared.get("fill-opacity"), 1.0)
    stroke_opacity = _resolve_number(info.declared.get("stroke-opacity"), 1.0)
    if fill is not None and fill_opacity != 1.0:
        fill = (fill[0], fill[1], fill[2], fill[3] * max(0.0, min(1.0, fill_opacity)))
    if stroke is not None and stroke_opacity != 1.0:
        stroke = (stroke[0], stroke[1], stroke[2], stroke[3] * max(0.0, min(1.0, stroke_opacity)))
    stroke_width = max(0.0, _resolve_number(info.declared.get("stroke-width"), 1.0))
    style = ResolvedStyle(fill=fill, stroke=stroke, stroke_width=stroke_width,
                          opacity=info.opacity)

    if info.display_none or info.opacity == 0.0:
        # invisible: flag via a zero-area bbox at the geometric center
        bbox = BoundingBox(bbox.cx, bbox.cx, bbox.cy, bbox.cy)

    return GraphicalElement(id=element_id, kind=kind, closed=closed,
                            geometry=geometry, style=style, bbox=bbox,
                            font_size=font_size)


def _canvas_geometry(root: ET.Element) -> tuple[float, float, tf.Affine]:
    viewbox = root.get("viewBox")
    if viewbox:
        nums = [float(v) for v in _POINTS_RE.findall(viewbox)]
        if len(nums) == 4 and nums[2] > 0 and nums[3] > 0:
            return nums[2], nums[3], tf.translation(-nums[0], -nums[1])
    w = _parse_length(root.get("width"))
    h = _parse_length(root.get("height"))
    if w is not None and h is not None and w > 0 and h > 0:
        return w, h, tf.IDENTITY
    raise NoCanvas("svg root has neither a usable viewBox nor width/height")


def _resolve_background(elements: list[GraphicalElement], canvas_w: float,
                        canvas_h: float) -> tuple[tuple[int, int, int], str | None]:
    canvas_area = canvas_w * canvas_h
    best: GraphicalElement | None = None
    for e in elements:
        if e.kind != "rect" or e.style.fill is None:
            continue
        ix = max(0.0, min(e.bbox.right, canvas_w) - max(e.bbox.left, 0.0))
        iy = max(0.0, min(e.bbox.bottom, canvas_h) - max(e.bbox.top, 0.0))
        if ix * iy >= BACKGROUND_COVERAGE * canvas_area:
            if best is None or e.bbox.area > best.bbox.area:
                best = e
    if best is None:
        return (255, 255, 255), None
    color = composite_over(best.style.fill, best.style.opacity, (255, 255, 255))
    return color, best.id


def parse_chart(svg_text: str) -> ChartDocument:
    """Parse SVG text into a ChartDocument.

    Raises MalformedSvg for XML errors and NoCanvas when the root carries
    neither width/height nor a viewBox. Unknown element kinds become
    kind="other" rather than failing.
    """
    try:
        root = ET.fromstring(svg_text)
    except ET.ParseError as exc:
        raise MalformedSvg(str(exc)) from exc
    if local_name(root.tag) != "svg":
        raise MalformedSvg("root element is not <svg>")

    canvas_w, canvas_h, base = _canvas_geometry(root)
    gradients = _collect_gradients(root)

    walker = _Walker()
    walker.walk(root, base)
    warnings = walker.warnings
    ids = assign_ids(walker.infos, warnings)
    elements = [_build_element(info, element_id, gradients, warnings)
                for info, element_id in zip(walker.infos, ids)]

    background, background_id = _resolve_background(elements, canvas_w, canvas_h)
    return ChartDocument(
        source_text=svg_text,
        canvas_width=canvas_w,
        canvas_height=canvas_h,
        elements=tuple(elements),
        background_color=background,
        background_element_id=background_id,
        warnings=tuple(warnings),
    )


def blended_color(element: GraphicalElement, doc: ChartDocument,
                  slot: str = "fill") -> tuple[int, int, int]:
    """Composite the element's fill or stroke paint over the chart backdrop.

    The paint's alpha is scaled by the element opacity; the result is opaque
    RGB. The background rect itself composites over white.
    """
    paint = element.style.fill if slot == "fill" else element.style.stroke
    if paint is None:
        raise ValueError(f"element {element.id} has no {slot} paint")
    backdrop = doc.background_color
    if element.id == doc.background_element_id:
        backdrop = (255, 255, 255)
    return composite_over(paint, element.style.opacity, backdrop)
