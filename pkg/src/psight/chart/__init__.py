"""Chart document model: SVG parsing, editing, and color utilities."""

from .color import (
    RGB,
    RGBA,
    composite_over,
    hsl_to_rgb,
    parse_color,
    rgb_literal,
    rgb_to_hsl,
)
from .edit import (
    BatchShift,
    EditCommand,
    InsertAnnotation,
    SetAttribute,
    apply_edit,
    reserialize,
)
from .parse import blended_color, parse_chart
from .types import (
    CLOSED_KINDS,
    KINDS,
    BoundingBox,
    ChartDocument,
    GraphicalElement,
    ResolvedStyle,
)

__all__ = [
    "RGB",
    "RGBA",
    "composite_over",
    "hsl_to_rgb",
    "parse_color",
    "rgb_literal",
    "rgb_to_hsl",
    "BatchShift",
    "EditCommand",
    "InsertAnnotation",
    "SetAttribute",
    "apply_edit",
    "reserialize",
    "blended_color",
    "parse_chart",
    "CLOSED_KINDS",
    "KINDS",
    "BoundingBox",
    "ChartDocument",
    "GraphicalElement",
    "ResolvedStyle",
]
