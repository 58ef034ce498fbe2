/** Structural walk of a rendered SVG that reproduces the server's element
 * inventory: which nodes count as chart elements and the id each one gets
 * (explicit id when unique, otherwise a path id like "/svg/g[1]/rect[2]").
 * This is pure DOM bookkeeping — used to map clicks to element ids and ids
 * back to nodes for highlighting; no visual quantity is derived here. */

const RENDERABLE = new Set([
  "rect",
  "circle",
  "ellipse",
  "line",
  "polyline",
  "polygon",
  "path",
  "text",
  "image",
]);

const CONTAINERS = new Set(["svg", "g", "a"]);

const SKIPPED = new Set([
  "defs",
  "symbol",
  "marker",
  "clipPath",
  "mask",
  "pattern",
  "style",
  "script",
  "metadata",
  "title",
  "desc",
  "linearGradient",
  "radialGradient",
  "filter",
  "animate",
  "animateTransform",
  "set",
]);

export interface DomElementEntry {
  id: string;
  kind: string;
  node: Element;
}

interface RawEntry {
  node: Element;
  pathId: string;
  explicitId: string | null;
  kind: string;
}

function collect(node: Element, path: string, out: RawEntry[]): void {
  const name = node.localName;
  if (SKIPPED.has(name)) return;
  if (RENDERABLE.has(name) || (!CONTAINERS.has(name) && path !== "/svg")) {
    out.push({
      node,
      pathId: path,
      explicitId: node.getAttribute("id"),
      kind: RENDERABLE.has(name) ? name : "other",
    });
    return;
  }
  const counters = new Map<string, number>();
  for (const child of Array.from(node.children)) {
    const childName = child.localName;
    if (SKIPPED.has(childName)) continue;
    const nth = (counters.get(childName) ?? 0) + 1;
    counters.set(childName, nth);
    collect(child, `${path}/${childName}[${nth}]`, out);
  }
}

/** List the chart elements of a rendered <svg> root in document order. */
export function walkSvg(root: Element): DomElementEntry[] {
  if (root.localName !== "svg") {
    throw new Error("walkSvg expects an <svg> root");
  }
  const raw: RawEntry[] = [];
  collect(root, "/svg", raw);

  const explicitCounts = new Map<string, number>();
  for (const entry of raw) {
    if (entry.explicitId) {
      explicitCounts.set(
        entry.explicitId,
        (explicitCounts.get(entry.explicitId) ?? 0) + 1,
      );
    }
  }
  const used = new Set<string>();
  return raw.map((entry) => {
    const explicit = entry.explicitId;
    const id =
      explicit && explicitCounts.get(explicit) === 1 && !used.has(explicit)
        ? explicit
        : entry.pathId;
    used.add(id);
    return { id, kind: entry.kind, node: entry.node };
  });
}

/** id → DOM node for one rendered copy of the chart. */
export function nodeIndex(root: Element): Map<string, Element> {
  const index = new Map<string, Element>();
  for (const entry of walkSvg(root)) index.set(entry.id, entry.node);
  return index;
}

/** Element id for a click target: the entry whose node contains `target`. */
export function idForNode(root: Element, target: Element): string | null {
  for (const entry of walkSvg(root)) {
    if (entry.node === target || entry.node.contains(target)) return entry.id;
  }
  return null;
}
