"""2D affine transforms for flattening SVG transform attributes.

A transform is a 6-tuple (a, b, c, d, e, f) mapping (x, y) to
(a*x + c*y + e, b*x + d*y + f), matching SVG's matrix(a b c d e f).
"""

from __future__ import annotations

import math
import re

Affine = tuple[float, float, float, float, float, float]

IDENTITY: Affine = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)

_FUNC_RE = re.compile(r"([a-zA-Z]+)\s*\(([^)]*)\)")
_NUM_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def compose(outer: Affine, inner: Affine) -> Affine:
    """Return outer ∘ inner (inner applied first)."""
    a1, b1, c1, d1, e1, f1 = outer
    a2, b2, c2, d2, e2, f2 = inner
    return (
        a1 * a2 + c1 * b2,
        b1 * a2 + d1 * b2,
        a1 * c2 + c1 * d2,
        b1 * c2 + d1 * d2,
        a1 * e2 + c1 * f2 + e1,
        b1 * e2 + d1 * f2 + f1,
    )


def apply(t: Affine, x: float, y: float) -> tuple[float, float]:
    a, b, c, d, e, f = t
    return (a * x + c * y + e, b * x + d * y + f)


def apply_vector(t: Affine, dx: float, dy: float) -> tuple[float, float]:
    """Apply only the linear part (no translation) to a direction vector."""
    a, b, c, d, _, _ = t
    return (a * dx + c * dy, b * dx + d * dy)


def invert_linear(t: Affine) -> tuple[float, float, float, float] | None:
    """Invert the 2x2 linear part; None when singular."""
    a, b, c, d, _, _ = t
    det = a * d - b * c
    if abs(det) < 1e-12:
        return None
    return (d / det, -b / det, -c / det, a / det)


def translation(dx: float, dy: float) -> Affine:
    return (1.0, 0.0, 0.0, 1.0, dx, dy)


def parse_transform(text: str | None) -> tuple[Affine, list[str]]:
    """Parse an SVG transform attribute into one flattened affine.

    Supported functions: translate, scale, rotate, matrix. Anything else is
    skipped and reported in the returned warning list.
    """
    result = IDENTITY
    warnings: list[str] = []
    if not text:
        return result, warnings
    for name, argstr in _FUNC_RE.findall(text):
        args = [float(v) for v in _NUM_RE.findall(argstr)]
        name = name.strip()
        if name == "translate":
            dx = args[0] if args else 0.0
            dy = args[1] if len(args) > 1 else 0.0
            t: Affine = (1.0, 0.0, 0.0, 1.0, dx, dy)
        elif name == "scale":
            sx = args[0] if args else 1.0
            sy = args[1] if len(args) > 1 else sx
            t = (sx, 0.0, 0.0, sy, 0.0, 0.0)
        elif name == "rotate":
            ang = math.radians(args[0]) if args else 0.0
            ca, sa = math.cos(ang), math.sin(ang)
            t = (ca, sa, -sa, ca, 0.0, 0.0)
            if len(args) == 3:
                cx, cy = args[1], args[2]
                t = compose(compose(translation(cx, cy), t), translation(-cx, -cy))
        elif name == "matrix" and len(args) == 6:
            t = tuple(args)  # type: ignore[assignment]
        else:
            warnings.append(f"unsupported transform function {name!r} ignored")
            continue
        result = compose(result, t)
    return result, warnings
