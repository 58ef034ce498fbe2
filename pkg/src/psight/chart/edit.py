"""Edit commands applied to chart source text.

Edits operate on the XML tree rather than on parsed elements so that the
result is always a well-formed SVG document that reparses cleanly. Each
apply_edit call reparses the source, locates the target nodes by the same
id-assignment rules the parser uses, mutates the tree, and reparses the
serialized result.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from ..errors import MalformedSvg, UnknownElementId
from . import transform as tf
from .parse import (
    SVG_NS,
    _canvas_geometry,
    _parse_style_attr,
    _Walker,
    assign_ids,
    local_name,
    parse_chart,
)
from .types import ChartDocument

ET.register_namespace("", SVG_NS)
ET.register_namespace("xlink", "http://www.w3.org/1999/xlink")


@dataclass(frozen=True)
class SetAttribute:
    """Set one presentation property on one element.

    When the property is already declared in the element's inline style
    attribute, the declaration is rewritten in place (so the new value is not
    shadowed); otherwise the plain XML attribute is set.
    """

    element_id: str
    name: str
    value: str


@dataclass(frozen=True)
class BatchShift:
    """Translate a set of elements by (dx, dy) in canvas coordinates."""

    element_ids: tuple[str, ...]
    dx: float
    dy: float


@dataclass(frozen=True)
class InsertAnnotation:
    """Append an overlay shape (rect or polyline) as the last child of the
    root, so it renders above the chart content."""

    kind: str  # "rect" | "polyline"
    geometry: dict
    style: dict[str, str] = field(default_factory=dict)


EditCommand = SetAttribute | BatchShift | InsertAnnotation


def _fmt(value: float) -> str:
    f = float(value)
    return str(int(f)) if f == int(f) and abs(f) < 1e15 else repr(f)


def _node_map(root: ET.Element) -> dict[str, "_WalkEntry"]:
    base_w = _Walker()
    try:
        _, _, base = _canvas_geometry(root)
    except Exception:
        base = tf.IDENTITY
    base_w.walk(root, base)
    ids = assign_ids(base_w.infos, [])
    return {eid: _WalkEntry(info.node, info.parent_transform)
            for eid, info in zip(ids, base_w.infos)}


@dataclass
class _WalkEntry:
    node: ET.Element
    parent_transform: tf.Affine


def _set_attribute(entry: _WalkEntry, name: str, value: str) -> None:
    node = entry.node
    style = _parse_style_attr(node.get("style"))
    if name in style:
        style[name] = value
        node.set("style", "; ".join(f"{k}: {v}" for k, v in style.items()))
    else:
        node.set(name, value)


def _shift_node(entry: _WalkEntry, dx: float, dy: float) -> None:
    """Prepend a translate that moves the element by (dx, dy) on the canvas.

    The node's transform chain runs inside its ancestors' frame, so the
    canvas-space delta is mapped through the inverse of the ancestor linear
    part first.
    """
    inv = tf.invert_linear(entry.parent_transform)
    if inv is None:
        raise ValueError("ancestor transform is singular; cannot shift")
    ia, ib, ic, id_ = inv
    local_dx = ia * dx + ic * dy
    local_dy = ib * dx + id_ * dy
    node = entry.node
    existing = node.get("transform", "").strip()
    prefix = f"translate({_fmt(local_dx)}, {_fmt(local_dy)})"
    node.set("transform", f"{prefix} {existing}".strip())


def _insert_annotation(root: ET.Element, command: InsertAnnotation) -> None:
    ns = ""
    if root.tag.startswith("{"):
        ns = root.tag[: root.tag.index("}") + 1]
    if command.kind == "rect":
        g = command.geometry
        node = ET.SubElement(root, f"{ns}rect", {
            "x": _fmt(g["x"]), "y": _fmt(g["y"]),
            "width": _fmt(g["width"]), "height": _fmt(g["height"]),
        })
    elif command.kind == "polyline":
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in command.geometry["points"])
        node = ET.SubElement(root, f"{ns}polyline", {"points": pts})
    else:
        raise ValueError(f"unsupported annotation kind {command.kind!r}")
    defaults = {"fill": "none"}
    for key, value in {**defaults, **command.style}.items():
        node.set(key, str(value))


def apply_edit(doc: ChartDocument, commands: list[EditCommand]) -> ChartDocument:
    """Apply edit commands to the document and return the reparsed result.

    Raises UnknownElementId when a command addresses an element that does not
    exist in the document.
    """
    try:
        root = ET.fromstring(doc.source_text)
    except ET.ParseError as exc:  # pragma: no cover - doc came from a parse
        raise MalformedSvg(str(exc)) from exc
    nodes = _node_map(root)

    def lookup(element_id: str) -> _WalkEntry:
        if element_id not in nodes:
            raise UnknownElementId(f"no element with id {element_id!r}")
        return nodes[element_id]

    for command in commands:
        if isinstance(command, SetAttribute):
            _set_attribute(lookup(command.element_id), command.name, command.value)
        elif isinstance(command, BatchShift):
            entries = [lookup(eid) for eid in command.element_ids]
            for entry in entries:
                _shift_node(entry, command.dx, command.dy)
        elif isinstance(command, InsertAnnotation):
            _insert_annotation(root, command)
        else:
            raise TypeError(f"unsupported edit command {type(command).__name__}")

    new_text = ET.tostring(root, encoding="unicode")
    return parse_chart(new_text)


def reserialize(doc: ChartDocument) -> str:
    """Round the source through the XML layer without any edits."""
    root = ET.fromstring(doc.source_text)
    return ET.tostring(root, encoding="unicode")
