"""Per-element visual-effect vectors.

Each element is described by 23 dimensions: 13 appearance dimensions (shape
type, fill and stroke color in HSL with the hue decomposed into sine/cosine,
stroke width, bbox size) and 10 position dimensions (bbox centroid and edges
plus two 2-d MDS embeddings of pairwise contact and common-region
relationships). Values are normalized per chart to [0,1]; dimensions that do
not apply to an element (e.g. fill on an unfilled line) are masked and carry
value 0.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .chart.parse import blended_color
from .chart.types import KINDS, BoundingBox, ChartDocument, GraphicalElement
from .chart.color import rgb_to_hsl
from .errors import EmptyChart, UnknownElementId

DIMENSION_NAMES: tuple[str, ...] = (
    "type_code",
    "fill_hue_sin", "fill_hue_cos", "fill_saturation", "fill_lightness",
    "stroke_hue_sin", "stroke_hue_cos", "stroke_saturation", "stroke_lightness",
    "stroke_width",
    "bbox_width", "bbox_height", "area",
    "centroid_x", "centroid_y",
    "bbox_left", "bbox_right", "bbox_top", "bbox_bottom",
    "mds_contact_1", "mds_contact_2", "mds_region_1", "mds_region_2",
)

N_DIMS = len(DIMENSION_NAMES)
APPEARANCE_DIMS = tuple(range(0, 13))
POSITION_DIMS = tuple(range(13, 23))

# indices normalized against a fixed range instead of the chart's min/max
_SINCOS_DIMS = (1, 2, 5, 6)
_X_PX_DIMS = (13, 15, 16)   # centroid_x, bbox_left, bbox_right
_Y_PX_DIMS = (14, 17, 18)   # centroid_y, bbox_top, bbox_bottom

# a dimension whose chart-wide spread is below this is treated as constant
CONSTANT_TOLERANCE = 1e-9

# contact gap tolerance as a fraction of the canvas diagonal
GAP_TOLERANCE_RATIO = 0.01


def hue_to_components(hue_degrees: float) -> tuple[float, float]:
    """Decompose a hue angle into (sin, cos) so that 0 and 360 coincide."""
    theta = math.radians(hue_degrees)
    return math.sin(theta), math.cos(theta)


def extract_appearance(element: GraphicalElement,
                       doc: ChartDocument) -> tuple[list[float], list[bool]]:
    """Raw (unnormalized) appearance dimensions plus applicability mask."""
    values = [0.0] * 13
    mask = [True] * 13
    values[0] = KINDS.index(element.kind) / (len(KINDS) - 1)

    if element.style.fill is not None:
        h, s, l = rgb_to_hsl(blended_color(element, doc, "fill"))
        sin_h, cos_h = hue_to_components(h)
        values[1:5] = [sin_h, cos_h, s, l]
    else:
        mask[1:5] = [False] * 4

    if element.style.stroke is not None:
        h, s, l = rgb_to_hsl(blended_color(element, doc, "stroke"))
        sin_h, cos_h = hue_to_components(h)
        values[5:9] = [sin_h, cos_h, s, l]
        values[9] = element.style.stroke_width
    else:
        mask[5:10] = [False] * 5

    values[10] = element.bbox.width
    values[11] = element.bbox.height
    values[12] = element.bbox.area
    return values, mask


@dataclass(frozen=True)
class RelationshipMatrices:
    contact: np.ndarray  # n×n, {0,1}, zero diagonal
    region: np.ndarray   # n×n, {0,1}, zero diagonal


def _innermost_container(element: GraphicalElement,
                         candidates: list[GraphicalElement]) -> str | None:
    """Smallest closed element whose bbox strictly contains the element's
    bbox; None means the canvas itself is the container."""
    best: GraphicalElement | None = None
    for other in candidates:
        if other.id == element.id or not other.closed:
            continue
        if other.bbox.strictly_contains(element.bbox):
            if best is None or other.bbox.area < best.bbox.area:
                best = other
    return best.id if best is not None else None


def build_relationship_matrices(doc: ChartDocument,
                                elements: list[GraphicalElement] | None = None,
                                ) -> RelationshipMatrices:
    if elements is None:
        elements = list(doc.elements)
    n = len(elements)
    gap = GAP_TOLERANCE_RATIO * doc.canvas_diagonal
    expanded = [e.bbox.expanded(gap) for e in elements]
    contact = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            if expanded[i].intersects(expanded[j]):
                contact[i, j] = contact[j, i] = 1.0

    containers = [_innermost_container(e, elements) for e in elements]
    region = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            if containers[i] == containers[j]:
                region[i, j] = region[j, i] = 1.0
    return RelationshipMatrices(contact=contact, region=region)


def contact_to_distance(contact: np.ndarray) -> np.ndarray:
    """Graph geodesic distance on the contact graph; disconnected pairs get
    the graph diameter plus one."""
    n = contact.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    dist = shortest_path(contact, method="D", unweighted=True, directed=False)
    finite = dist[np.isfinite(dist)]
    diameter = float(finite.max()) if finite.size else 0.0
    dist[~np.isfinite(dist)] = diameter + 1.0
    return dist


def region_to_distance(region: np.ndarray) -> np.ndarray:
    """Same region → distance 0, different region → 1."""
    dist = 1.0 - region
    np.fill_diagonal(dist, 0.0)
    return dist


def mds_embed(distance: np.ndarray, dims: int = 2) -> np.ndarray:
    """Classical (Torgerson) MDS of a symmetric distance matrix.

    Negative or near-zero eigenvalues are clamped to zero, and each output
    dimension's sign is fixed so its first nonzero coordinate is
    non-negative. n < 2 yields all-zero coordinates.
    """
    n = distance.shape[0]
    if n < 2:
        return np.zeros((n, dims))
    d2 = np.asarray(distance, dtype=float) ** 2
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ d2 @ j
    b = (b + b.T) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(b)
    order = np.argsort(eigenvalues)[::-1][:dims]
    coords = np.zeros((n, dims))
    for out_dim, idx in enumerate(order):
        lam = eigenvalues[idx]
        if lam <= CONSTANT_TOLERANCE:
            continue
        column = eigenvectors[:, idx] * math.sqrt(lam)
        nonzero = np.nonzero(np.abs(column) > CONSTANT_TOLERANCE)[0]
        if nonzero.size and column[nonzero[0]] < 0:
            column = -column
        coords[:, out_dim] = column
    return coords


@dataclass(frozen=True)
class DimensionNorm:
    strategy: str  # "minmax" | "fixed" | "constant"
    low: float
    high: float


@dataclass(frozen=True)
class ChartFeatureTable:
    element_ids: tuple[str, ...]
    values: np.ndarray          # n×23, normalized to [0,1]
    mask: np.ndarray            # n×23 booleans
    raw: np.ndarray             # n×23, pre-normalization values
    normalization: tuple[DimensionNorm, ...]
    warnings: tuple[str, ...] = ()

    def row(self, element_id: str) -> np.ndarray:
        try:
            idx = self.element_ids.index(element_id)
        except ValueError:
            raise UnknownElementId(f"no element with id {element_id!r}") from None
        return self.values[idx]

    def to_csv(self) -> str:
        """Delimited table: element_id column plus one column per dimension."""
        out = io.StringIO()
        out.write("element_id," + ",".join(DIMENSION_NAMES) + "\n")
        for i, eid in enumerate(self.element_ids):
            cells = ",".join(format(v, ".10g") for v in self.values[i])
            out.write(f"{eid},{cells}\n")
        return out.getvalue()


def _normalize_dimension(raw: np.ndarray, mask: np.ndarray, dim: int,
                         canvas_w: float, canvas_h: float,
                         ) -> tuple[np.ndarray, DimensionNorm]:
    column = raw[:, dim]
    present = mask[:, dim]
    if dim in _SINCOS_DIMS:
        norm = DimensionNorm("fixed", -1.0, 1.0)
        values = (column + 1.0) / 2.0
    elif dim in _X_PX_DIMS or dim in _Y_PX_DIMS:
        extent = canvas_w if dim in _X_PX_DIMS else canvas_h
        norm = DimensionNorm("fixed", 0.0, extent)
        values = column / extent if extent > 0 else np.zeros_like(column)
    else:
        usable = column[present]
        if usable.size == 0:
            norm = DimensionNorm("constant", 0.0, 0.0)
            values = np.zeros_like(column)
        else:
            low, high = float(usable.min()), float(usable.max())
            if high - low < CONSTANT_TOLERANCE:
                norm = DimensionNorm("constant", low, high)
                values = np.full_like(column, 0.5)
            else:
                norm = DimensionNorm("minmax", low, high)
                values = (column - low) / (high - low)
    values = np.clip(values, 0.0, 1.0)
    values = np.where(present, values, 0.0)
    return values, norm


def extract_features(doc: ChartDocument,
                     scope: list[str] | None = None) -> ChartFeatureTable:
    """Build the full normalized feature table for the document.

    `scope` restricts extraction to the given element ids (in document
    order); excluded elements take no part in relationship matrices or
    normalization ranges. Raises EmptyChart when nothing is in scope.
    """
    if scope is None:
        elements = list(doc.elements)
    else:
        wanted = set(scope)
        for eid in wanted:
            doc.element(eid)  # raises UnknownElementId
        elements = [e for e in doc.elements if e.id in wanted]
    if not elements:
        raise EmptyChart("no elements to featurize")

    n = len(elements)
    warnings: list[str] = []
    raw = np.zeros((n, N_DIMS))
    mask = np.ones((n, N_DIMS), dtype=bool)
    for i, element in enumerate(elements):
        appearance, appearance_mask = extract_appearance(element, doc)
        raw[i, 0:13] = appearance
        mask[i, 0:13] = appearance_mask
        bbox: BoundingBox = element.bbox
        raw[i, 13:19] = (bbox.cx, bbox.cy, bbox.left, bbox.right,
                         bbox.top, bbox.bottom)

    matrices = build_relationship_matrices(doc, elements)
    if n < 2:
        warnings.append("fewer than 2 elements; MDS coordinates are all zero")
    raw[:, 19:21] = mds_embed(contact_to_distance(matrices.contact))
    raw[:, 21:23] = mds_embed(region_to_distance(matrices.region))

    values = np.zeros_like(raw)
    norms: list[DimensionNorm] = []
    for dim in range(N_DIMS):
        values[:, dim], norm = _normalize_dimension(
            raw, mask, dim, doc.canvas_width, doc.canvas_height)
        norms.append(norm)

    return ChartFeatureTable(
        element_ids=tuple(e.id for e in elements),
        values=values,
        mask=mask,
        raw=raw,
        normalization=tuple(norms),
        warnings=tuple(warnings),
    )
