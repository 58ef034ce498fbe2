"""SVG path-data parsing.

Produces, per subpath, the list of on-curve and control points (enough for a
conservative control-point-hull bounding box) and whether the subpath is
explicitly closed with Z.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_TOKEN_RE = re.compile(r"([MmLlHhVvCcSsQqTtAaZz])|([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)")


@dataclass
class Subpath:
    points: list[tuple[float, float]] = field(default_factory=list)
    closed: bool = False


def _tokens(d: str) -> list[str]:
    out = []
    for cmd, num in _TOKEN_RE.findall(d):
        out.append(cmd if cmd else num)
    return out


def parse_path_data(d: str) -> tuple[list[Subpath], list[str]]:
    """Parse a path ``d`` attribute.

    Lines and cubic/quadratic beziers contribute all their coordinates
    (control points included — conservative hull). Arc segments contribute
    only their endpoints, with a warning.
    """
    tokens = _tokens(d)
    subpaths: list[Subpath] = []
    warnings: list[str] = []
    cur: Subpath | None = None
    x = y = 0.0
    start_x = start_y = 0.0
    i = 0
    cmd = ""

    def need(n: int) -> list[float]:
        nonlocal i
        vals = [float(tokens[i + k]) for k in range(n)]
        i += n
        return vals

    def ensure_subpath() -> Subpath:
        nonlocal cur
        if cur is None:
            cur = Subpath(points=[(x, y)])
            subpaths.append(cur)
        return cur

    while i < len(tokens):
        tok = tokens[i]
        if tok.isalpha():
            cmd = tok
            i += 1
            if cmd in "Zz":
                if cur is not None:
                    cur.closed = True
                    x, y = start_x, start_y
                cur = None
                continue
        rel = cmd.islower()
        op = cmd.upper()
        if op == "M":
            (mx, my) = need(2)
            x, y = (x + mx, y + my) if rel else (mx, my)
            start_x, start_y = x, y
            cur = Subpath(points=[(x, y)])
            subpaths.append(cur)
            # subsequent implicit pairs are lineto with the same relativity
            cmd = "l" if rel else "L"
        elif op == "L":
            (lx, ly) = need(2)
            x, y = (x + lx, y + ly) if rel else (lx, ly)
            ensure_subpath().points.append((x, y))
        elif op == "H":
            (hx,) = need(1)
            x = x + hx if rel else hx
            ensure_subpath().points.append((x, y))
        elif op == "V":
            (vy,) = need(1)
            y = y + vy if rel else vy
            ensure_subpath().points.append((x, y))
        elif op == "C":
            c1x, c1y, c2x, c2y, ex, ey = need(6)
            if rel:
                c1x, c1y, c2x, c2y, ex, ey = x + c1x, y + c1y, x + c2x, y + c2y, x + ex, y + ey
            sp = ensure_subpath()
            sp.points.extend([(c1x, c1y), (c2x, c2y), (ex, ey)])
            x, y = ex, ey
        elif op == "S":
            c2x, c2y, ex, ey = need(4)
            if rel:
                c2x, c2y, ex, ey = x + c2x, y + c2y, x + ex, y + ey
            sp = ensure_subpath()
            sp.points.extend([(c2x, c2y), (ex, ey)])
            x, y = ex, ey
        elif op == "Q":
            cx, cy, ex, ey = need(4)
            if rel:
                cx, cy, ex, ey = x + cx, y + cy, x + ex, y + ey
            sp = ensure_subpath()
            sp.points.extend([(cx, cy), (ex, ey)])
            x, y = ex, ey
        elif op == "T":
            ex, ey = need(2)
            if rel:
                ex, ey = x + ex, y + ey
            ensure_subpath().points.append((ex, ey))
            x, y = ex, ey
        elif op == "A":
            _rx, _ry, _rot, _laf, _sf, ex, ey = need(7)
            if rel:
                ex, ey = x + ex, y + ey
            ensure_subpath().points.append((ex, ey))
            x, y = ex, ey
            if "arc endpoints only" not in " ".join(warnings):
                warnings.append("arc segments bounded by endpoints only (arc endpoints only)")
        else:
            # unknown command letter: stop parsing defensively
            warnings.append(f"unrecognized path command {cmd!r}; remainder skipped")
            break
    return subpaths, warnings


def path_is_closed(subpaths: list[Subpath]) -> bool:
    """A path counts as closed when every subpath ends with Z."""
    return bool(subpaths) and all(sp.closed for sp in subpaths)
