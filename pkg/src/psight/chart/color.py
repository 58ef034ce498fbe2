"""Color parsing and alpha compositing for resolved SVG paints.

Colors are held as RGBA tuples: channels 0-255 ints, alpha a float in [0,1].
"""

from __future__ import annotations

import math
import re

RGBA = tuple[int, int, int, float]
RGB = tuple[int, int, int]

# CSS3/SVG 1.1 named colors (full standard table).
NAMED_COLORS: dict[str, RGB] = {
    "aliceblue": (240, 248, 255), "antiquewhite": (250, 235, 215),
    "aqua": (0, 255, 255), "aquamarine": (127, 255, 212), "azure": (240, 255, 255),
    "beige": (245, 245, 220), "bisque": (255, 228, 196), "black": (0, 0, 0),
    "blanchedalmond": (255, 235, 205), "blue": (0, 0, 255),
    "blueviolet": (138, 43, 226), "brown": (165, 42, 42),
    "burlywood": (222, 184, 135), "cadetblue": (95, 158, 160),
    "chartreuse": (127, 255, 0), "chocolate": (210, 105, 30),
    "coral": (255, 127, 80), "cornflowerblue": (100, 149, 237),
    "cornsilk": (255, 248, 220), "crimson": (220, 20, 60), "cyan": (0, 255, 255),
    "darkblue": (0, 0, 139), "darkcyan": (0, 139, 139),
    "darkgoldenrod": (184, 134, 11), "darkgray": (169, 169, 169),
    "darkgreen": (0, 100, 0), "darkgrey": (169, 169, 169),
    "darkkhaki": (189, 183, 107), "darkmagenta": (139, 0, 139),
    "darkolivegreen": (85, 107, 47), "darkorange": (255, 140, 0),
    "darkorchid": (153, 50, 204), "darkred": (139, 0, 0),
    "darksalmon": (233, 150, 122), "darkseagreen": (143, 188, 143),
    "darkslateblue": (72, 61, 139), "darkslategray": (47, 79, 79),
    "darkslategrey": (47, 79, 79), "darkturquoise": (0, 206, 209),
    "darkviolet": (148, 0, 211), "deeppink": (255, 20, 147),
    "deepskyblue": (0, 191, 255), "dimgray": (105, 105, 105),
    "dimgrey": (105, 105, 105), "dodgerblue": (30, 144, 255),
    "firebrick": (178, 34, 34), "floralwhite": (255, 250, 240),
    "forestgreen": (34, 139, 34), "fuchsia": (255, 0, 255),
    "gainsboro": (220, 220, 220), "ghostwhite": (248, 248, 255),
    "gold": (255, 215, 0), "goldenrod": (218, 165, 32), "gray": (128, 128, 128),
    "green": (0, 128, 0), "greenyellow": (173, 255, 47), "grey": (128, 128, 128),
    "honeydew": (240, 255, 240), "hotpink": (255, 105, 180),
    "indianred": (205, 92, 92), "indigo": (75, 0, 130), "ivory": (255, 255, 240),
    "khaki": (240, 230, 140), "lavender": (230, 230, 250),
    "lavenderblush": (255, 240, 245), "lawngreen": (124, 252, 0),
    "lemonchiffon": (255, 250, 205), "lightblue": (173, 216, 230),
    "lightcoral": (240, 128, 128), "lightcyan": (224, 255, 255),
    "lightgoldenrodyellow": (250, 250, 210), "lightgray": (211, 211, 211),
    "lightgreen": (144, 238, 144), "lightgrey": (211, 211, 211),
    "lightpink": (255, 182, 193), "lightsalmon": (255, 160, 122),
    "lightseagreen": (32, 178, 170), "lightskyblue": (135, 206, 250),
    "lightslategray": (119, 136, 153), "lightslategrey": (119, 136, 153),
    "lightsteelblue": (176, 196, 222), "lightyellow": (255, 255, 224),
    "lime": (0, 255, 0), "limegreen": (50, 205, 50), "linen": (250, 240, 230),
    "magenta": (255, 0, 255), "maroon": (128, 0, 0),
    "mediumaquamarine": (102, 205, 170), "mediumblue": (0, 0, 205),
    "mediumorchid": (186, 85, 211), "mediumpurple": (147, 112, 219),
    "mediumseagreen": (60, 179, 113), "mediumslateblue": (123, 104, 238),
    "mediumspringgreen": (0, 250, 154), "mediumturquoise": (72, 209, 204),
    "mediumvioletred": (199, 21, 133), "midnightblue": (25, 25, 112),
    "mintcream": (245, 255, 250), "mistyrose": (255, 228, 225),
    "moccasin": (255, 228, 181), "navajowhite": (255, 222, 173),
    "navy": (0, 0, 128), "oldlace": (253, 245, 230), "olive": (128, 128, 0),
    "olivedrab": (107, 142, 35), "orange": (255, 165, 0),
    "orangered": (255, 69, 0), "orchid": (218, 112, 214),
    "palegoldenrod": (238, 232, 170), "palegreen": (152, 251, 152),
    "paleturquoise": (175, 238, 238), "palevioletred": (219, 112, 147),
    "papayawhip": (255, 239, 213), "peachpuff": (255, 218, 185),
    "peru": (205, 133, 63), "pink": (255, 192, 203), "plum": (221, 160, 221),
    "powderblue": (176, 224, 230), "purple": (128, 0, 128),
    "rebeccapurple": (102, 51, 153), "red": (255, 0, 0),
    "rosybrown": (188, 143, 143), "royalblue": (65, 105, 225),
    "saddlebrown": (139, 69, 19), "salmon": (250, 128, 114),
    "sandybrown": (244, 164, 96), "seagreen": (46, 139, 87),
    "seashell": (255, 245, 238), "sienna": (160, 82, 45),
    "silver": (192, 192, 192), "skyblue": (135, 206, 235),
    "slateblue": (106, 90, 205), "slategray": (112, 128, 144),
    "slategrey": (112, 128, 144), "snow": (255, 250, 250),
    "springgreen": (0, 255, 127), "steelblue": (70, 130, 180),
    "tan": (210, 180, 140), "teal": (0, 128, 128), "thistle": (216, 191, 216),
    "tomato": (255, 99, 71), "turquoise": (64, 224, 208),
    "violet": (238, 130, 238), "wheat": (245, 222, 179),
    "white": (255, 255, 255), "whitesmoke": (245, 245, 245),
    "yellow": (255, 255, 0), "yellowgreen": (154, 205, 50),
}

_RGB_RE = re.compile(r"rgba?\(\s*([^)]*)\)")
_HSL_RE = re.compile(r"hsla?\(\s*([^)]*)\)")


def _clamp_channel(x: float) -> int:
    return max(0, min(255, int(round(x))))


def _parse_channel(token: str) -> float:
    token = token.strip()
    if token.endswith("%"):
        return float(token[:-1]) * 255.0 / 100.0
    return float(token)


def parse_color(text: str) -> RGBA | None:
    """Parse a CSS color literal into an RGBA tuple.

    Returns None for ``none``. Raises ValueError for text that is not a
    color this parser understands (url() references are resolved upstream).
    """
    text = text.strip()
    lowered = text.lower()
    if lowered in ("none",):
        return None
    if lowered == "transparent":
        return (0, 0, 0, 0.0)
    if lowered in NAMED_COLORS:
        r, g, b = NAMED_COLORS[lowered]
        return (r, g, b, 1.0)
    if text.startswith("#"):
        hexpart = text[1:]
        if len(hexpart) == 3:
            r, g, b = (int(c * 2, 16) for c in hexpart)
            return (r, g, b, 1.0)
        if len(hexpart) == 4:
            r, g, b, a = (int(c * 2, 16) for c in hexpart)
            return (r, g, b, a / 255.0)
        if len(hexpart) == 6:
            return (int(hexpart[0:2], 16), int(hexpart[2:4], 16), int(hexpart[4:6], 16), 1.0)
        if len(hexpart) == 8:
            return (int(hexpart[0:2], 16), int(hexpart[2:4], 16),
                    int(hexpart[4:6], 16), int(hexpart[6:8], 16) / 255.0)
        raise ValueError(f"bad hex color: {text!r}")
    m = _RGB_RE.fullmatch(lowered)
    if m:
        parts = [p for p in re.split(r"[,\s/]+", m.group(1).strip()) if p]
        if len(parts) not in (3, 4):
            raise ValueError(f"bad rgb() color: {text!r}")
        r, g, b = (_clamp_channel(_parse_channel(p)) for p in parts[:3])
        a = 1.0
        if len(parts) == 4:
            a = float(parts[3][:-1]) / 100.0 if parts[3].endswith("%") else float(parts[3])
            a = max(0.0, min(1.0, a))
        return (r, g, b, a)
    m = _HSL_RE.fullmatch(lowered)
    if m:
        parts = [p for p in re.split(r"[,\s/]+", m.group(1).strip()) if p]
        if len(parts) not in (3, 4):
            raise ValueError(f"bad hsl() color: {text!r}")
        h = float(parts[0].replace("deg", ""))
        s = float(parts[1].rstrip("%")) / 100.0
        l = float(parts[2].rstrip("%")) / 100.0
        r, g, b = hsl_to_rgb(h, s, l)
        a = 1.0
        if len(parts) == 4:
            a = float(parts[3][:-1]) / 100.0 if parts[3].endswith("%") else float(parts[3])
            a = max(0.0, min(1.0, a))
        return (r, g, b, a)
    raise ValueError(f"unrecognized color: {text!r}")


def hsl_to_rgb(h: float, s: float, l: float) -> RGB:
    """Convert HSL (h degrees, s/l in [0,1]) to 0-255 RGB."""
    h = h % 360.0
    c = (1.0 - abs(2.0 * l - 1.0)) * s
    x = c * (1.0 - abs((h / 60.0) % 2.0 - 1.0))
    m = l - c / 2.0
    sector = int(h // 60) % 6
    rgb1 = [(c, x, 0), (x, c, 0), (0, c, x), (0, x, c), (x, 0, c), (c, 0, x)][sector]
    return tuple(_clamp_channel((v + m) * 255.0) for v in rgb1)  # type: ignore[return-value]


def rgb_to_hsl(rgb: RGB) -> tuple[float, float, float]:
    """Convert 0-255 RGB to (hue degrees in [0,360), saturation, lightness).

    Achromatic colors return hue 0 and saturation 0.
    """
    r, g, b = (c / 255.0 for c in rgb)
    mx, mn = max(r, g, b), min(r, g, b)
    l = (mx + mn) / 2.0
    if math.isclose(mx, mn):
        return (0.0, 0.0, l)
    d = mx - mn
    s = d / (2.0 - mx - mn) if l > 0.5 else d / (mx + mn)
    if mx == r:
        h = ((g - b) / d) % 6.0
    elif mx == g:
        h = (b - r) / d + 2.0
    else:
        h = (r - g) / d + 4.0
    return (h * 60.0 % 360.0, s, l)


def composite_over(paint: RGBA, alpha_scale: float, backdrop: RGB) -> RGB:
    """Source-over composite an RGBA paint onto an opaque backdrop.

    ``alpha_scale`` multiplies the paint's own alpha (element opacity).
    Channels round half-up to ints, per-channel: a*src + (1-a)*dst.
    """
    a = max(0.0, min(1.0, paint[3] * alpha_scale))
    return tuple(
        int(math.floor(a * paint[i] + (1.0 - a) * backdrop[i] + 0.5)) for i in range(3)
    )  # type: ignore[return-value]


def rgb_literal(rgb: RGB) -> str:
    """Render an RGB tuple as an SVG attribute literal rgb(r, g, b)."""
    return f"rgb({rgb[0]}, {rgb[1]}, {rgb[2]})"
