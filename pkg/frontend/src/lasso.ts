/** Lasso geometry: hit-testing element screen rectangles against a dragged
 * rectangle or a freehand polygon. A rectangle lasso picks every element
 * whose rectangle overlaps it; a freehand lasso picks every element whose
 * center lies inside the closed polygon. */

export interface Rect {
  left: number;
  top: number;
  right: number;
  bottom: number;
}

export interface Point {
  x: number;
  y: number;
}

export interface HitTarget {
  id: string;
  rect: Rect;
}

export function normalizeRect(a: Point, b: Point): Rect {
  return {
    left: Math.min(a.x, b.x),
    top: Math.min(a.y, b.y),
    right: Math.max(a.x, b.x),
    bottom: Math.max(a.y, b.y),
  };
}

export function rectsOverlap(a: Rect, b: Rect): boolean {
  return (
    a.left <= b.right && b.left <= a.right && a.top <= b.bottom && b.top <= a.bottom
  );
}

/** Even-odd ray casting; points exactly on an edge count as inside. */
export function pointInPolygon(point: Point, polygon: Point[]): boolean {
  if (polygon.length < 3) return false;
  let inside = false;
  for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i++) {
    const a = polygon[i];
    const b = polygon[j];
    if (onSegment(point, a, b)) return true;
    const crosses =
      a.y > point.y !== b.y > point.y &&
      point.x < ((b.x - a.x) * (point.y - a.y)) / (b.y - a.y) + a.x;
    if (crosses) inside = !inside;
  }
  return inside;
}

function onSegment(p: Point, a: Point, b: Point): boolean {
  const cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (Math.abs(cross) > 1e-9) return false;
  return (
    Math.min(a.x, b.x) - 1e-9 <= p.x &&
    p.x <= Math.max(a.x, b.x) + 1e-9 &&
    Math.min(a.y, b.y) - 1e-9 <= p.y &&
    p.y <= Math.max(a.y, b.y) + 1e-9
  );
}

export function center(rect: Rect): Point {
  return { x: (rect.left + rect.right) / 2, y: (rect.top + rect.bottom) / 2 };
}

export function hitsInRect(targets: HitTarget[], lasso: Rect): string[] {
  return targets.filter((t) => rectsOverlap(t.rect, lasso)).map((t) => t.id);
}

export function hitsInPolygon(targets: HitTarget[], polygon: Point[]): string[] {
  return targets
    .filter((t) => pointInPolygon(center(t.rect), polygon))
    .map((t) => t.id);
}
