"""Domain types for parsed chart documents."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .color import RGB, RGBA

# Element kinds, in ordinal order (type_code = index / (len - 1)).
KINDS = ("rect", "circle", "ellipse", "line", "polyline", "polygon",
         "path", "text", "image", "other")

# Kinds that are closed shapes by construction; paths are closed iff every
# subpath ends with Z.
CLOSED_KINDS = frozenset({"rect", "circle", "ellipse", "polygon"})


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in canvas coordinates (y grows downward)."""

    left: float
    right: float
    top: float
    bottom: float

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.bottom - self.top

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def cx(self) -> float:
        return (self.left + self.right) / 2.0

    @property
    def cy(self) -> float:
        return (self.top + self.bottom) / 2.0

    def expanded(self, pad: float) -> "BoundingBox":
        return BoundingBox(self.left - pad, self.right + pad,
                           self.top - pad, self.bottom + pad)

    def intersects(self, other: "BoundingBox") -> bool:
        return (self.left <= other.right and other.left <= self.right
                and self.top <= other.bottom and other.top <= self.bottom)

    def strictly_contains(self, other: "BoundingBox") -> bool:
        return (self.left < other.left and self.right > other.right
                and self.top < other.top and self.bottom > other.bottom)

    @staticmethod
    def from_points(points: list[tuple[float, float]]) -> "BoundingBox":
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        return BoundingBox(min(xs), max(xs), min(ys), max(ys))


@dataclass(frozen=True)
class ResolvedStyle:
    """Paint state after merging presentation attributes, inline style and
    inherited group values (nearest declaration wins, inline over attribute).

    ``fill``/``stroke`` of None mean the paint is absent (``none``), never
    black. ``opacity`` is the product of the element's own opacity and all
    ancestor opacities.
    """

    fill: RGBA | None = None
    stroke: RGBA | None = None
    stroke_width: float = 1.0
    opacity: float = 1.0


@dataclass(frozen=True)
class GraphicalElement:
    """One renderable leaf element with flattened geometry."""

    id: str
    kind: str
    closed: bool
    geometry: dict[str, Any]
    style: ResolvedStyle
    bbox: BoundingBox
    font_size: float | None = None  # text only, used by the bbox heuristic


@dataclass(frozen=True)
class ChartDocument:
    """Immutable parsed chart: source text, canvas, and flat element list."""

    source_text: str
    canvas_width: float
    canvas_height: float
    elements: tuple[GraphicalElement, ...]
    background_color: RGB = (255, 255, 255)
    background_element_id: str | None = None
    warnings: tuple[str, ...] = ()
    _by_id: dict[str, GraphicalElement] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {e.id: e for e in self.elements})

    def element(self, element_id: str) -> GraphicalElement:
        from ..errors import UnknownElementId

        try:
            return self._by_id[element_id]
        except KeyError:
            raise UnknownElementId(element_id) from None

    def has_element(self, element_id: str) -> bool:
        return element_id in self._by_id

    @property
    def element_ids(self) -> list[str]:
        return [e.id for e in self.elements]

    @property
    def canvas_diagonal(self) -> float:
        return (self.canvas_width ** 2 + self.canvas_height ** 2) ** 0.5
