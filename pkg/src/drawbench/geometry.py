"""Screen/canvas coordinate model and the geometric predicates used by scoring.

All rects use half-open containment on their max edges (``x0 <= x < x1``)
so that the four quadrants partition the canvas exactly. The cursor window
is the one exception and is closed on every edge.
"""
from __future__ import annotations

import configparser
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

LAYOUT_VERSION = 1


class ToolKind(str, enum.Enum):
    PEN = "pen"
    ERASER = "eraser"
    FILL = "fill"
    LINE = "line"
    RECTANGLE = "rectangle"
    CIRCLE = "circle"

    def __str__(self) -> str:
        return self.value


FREEHAND_TOOLS = frozenset({ToolKind.PEN, ToolKind.ERASER})
SHAPE_TOOLS = frozenset({ToolKind.LINE, ToolKind.RECTANGLE, ToolKind.CIRCLE})


class RegionKind(str, enum.Enum):
    CENTER = "center"
    TOP_LEFT = "top-left"
    TOP_RIGHT = "top-right"
    BOTTOM_LEFT = "bottom-left"
    BOTTOM_RIGHT = "bottom-right"
    CORNERS = "corners"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Point:
    x: int
    y: int


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"inverted rect {self}")

    @classmethod
    def around(cls, center: Point, width: float, height: float) -> "Rect":
        return cls(center.x - width / 2, center.y - height / 2,
                   center.x + width / 2, center.y + height / 2)

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> "Rect":
        pts = list(points)
        if not pts:
            raise ValueError("no points")
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        return cls(min(xs), min(ys), max(xs), max(ys))

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def centroid(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    def contains(self, x: float, y: float) -> bool:
        """Half-open containment: the max edges are excluded."""
        return self.x0 <= x < self.x1 and self.y0 <= y < self.y1

    def contains_closed(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def contains_rect(self, other: "Rect") -> bool:
        return (self.x0 <= other.x0 and self.y0 <= other.y0
                and other.x1 <= self.x1 and other.y1 <= self.y1)

    def intersects(self, other: "Rect") -> bool:
        return (self.x0 < other.x1 and other.x0 < self.x1
                and self.y0 < other.y1 and other.y0 < self.y1)

    def clip(self, bounds: "Rect") -> Optional["Rect"]:
        """Intersection with ``bounds``; None when they do not touch."""
        x0, y0 = max(self.x0, bounds.x0), max(self.y0, bounds.y0)
        x1, y1 = min(self.x1, bounds.x1), min(self.y1, bounds.y1)
        if x0 > x1 or y0 > y1:
            return None
        return Rect(x0, y0, x1, y1)

    def translate(self, dx: float, dy: float) -> "Rect":
        return Rect(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)

    def clamp_point(self, x: float, y: float) -> tuple[float, float]:
        return (min(max(x, self.x0), self.x1), min(max(y, self.y0), self.y1))


@dataclass(frozen=True)
class CanvasSpec:
    origin: Point = Point(90, 70)
    width: int = 1000
    height: int = 700
    background: str = "#FFFFFF"

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")

    @property
    def rect(self) -> Rect:
        return Rect(self.origin.x, self.origin.y,
                    self.origin.x + self.width, self.origin.y + self.height)

    @property
    def area(self) -> int:
        return self.width * self.height

    def to_canvas(self, x: float, y: float) -> tuple[float, float]:
        return (x - self.origin.x, y - self.origin.y)


class HitKind(enum.Enum):
    TOOL = "tool"
    COLOR = "color"
    CANVAS = "canvas"
    WINDOW = "window-void"
    OUT = "out-of-window"


@dataclass(frozen=True)
class Hit:
    kind: HitKind
    target: Optional[str] = None   # tool name or hex color


@dataclass(frozen=True)
class UILayout:
    tool_hits: dict[ToolKind, Rect]
    color_hits: dict[str, Rect]
    color_names: dict[str, str]
    canvas: CanvasSpec = field(default_factory=CanvasSpec)
    window: Rect = Rect(0, 0, 1100, 800)
    version: int = LAYOUT_VERSION

    def validate(self) -> None:
        hits = list(self.tool_hits.values()) + list(self.color_hits.values())
        for i, a in enumerate(hits):
            if a.intersects(self.canvas.rect):
                raise ValueError(f"hit rect {a} overlaps the canvas")
            if not self.window.contains_rect(a):
                raise ValueError(f"hit rect {a} lies outside the window")
            for b in hits[i + 1:]:
                if a.intersects(b):
                    raise ValueError(f"hit rects {a} and {b} overlap")
        if not self.window.contains_rect(self.canvas.rect):
            raise ValueError("canvas lies outside the window")

    def tool_center(self, tool: ToolKind) -> Point:
        cx, cy = self.tool_hits[ToolKind(tool)].centroid
        return Point(int(cx), int(cy))

    def color_center(self, hex_color: str) -> Point:
        cx, cy = self.color_hits[hex_color.upper()].centroid
        return Point(int(cx), int(cy))

    def color_name(self, hex_color: str) -> str:
        return self.color_names.get(hex_color.upper(), hex_color)


TOOL_SIZE = 30
SWATCH_SIZE = 24

_TOOL_CENTERS = {
    ToolKind.PEN: (35, 45),
    ToolKind.ERASER: (35, 125),
    ToolKind.FILL: (35, 205),
    ToolKind.LINE: (35, 285),
    ToolKind.RECTANGLE: (35, 365),
    ToolKind.CIRCLE: (35, 445),
}

_COLORS = [
    ("black", "#000000", 405),
    ("red", "#FF0000", 429),
    ("green", "#00FF00", 453),
    ("blue", "#0000FF", 477),
    ("yellow", "#FFFF00", 501),
    ("magenta", "#FF00FF", 525),
    ("cyan", "#00FFFF", 549),
    ("white", "#FFFFFF", 573),
]
_PALETTE_Y = 25


def default_layout() -> UILayout:
    tools = {t: Rect.around(Point(*c), TOOL_SIZE, TOOL_SIZE) for t, c in _TOOL_CENTERS.items()}
    colors = {hx: Rect.around(Point(x, _PALETTE_Y), SWATCH_SIZE, SWATCH_SIZE) for _, hx, x in _COLORS}
    names = {hx: name for name, hx, _ in _COLORS}
    return UILayout(tool_hits=tools, color_hits=colors, color_names=names)


DEFAULT_LAYOUT = default_layout()
PALETTE = {name: hx for name, hx, _ in _COLORS}


def _ints(value: str, n: int) -> list[int]:
    parts = [int(p) for p in value.replace(",", " ").split()]
    if len(parts) != n:
        raise ValueError(f"expected {n} integers, got {value!r}")
    return parts


def load_layout(path: Union[str, Path]) -> UILayout:
    """Read a layout description file (INI sections, see docs/layout-format.md)."""
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep key case
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)

    version = cp.getint("layout", "version", fallback=LAYOUT_VERSION)
    if version != LAYOUT_VERSION:
        raise ValueError(f"unsupported layout version {version}")

    ox, oy = _ints(cp.get("canvas", "origin"), 2)
    w, h = _ints(cp.get("canvas", "size"), 2)
    canvas = CanvasSpec(Point(ox, oy), w, h, cp.get("canvas", "background", fallback="#FFFFFF").upper())
    window = Rect(*_ints(cp.get("window", "rect"), 4))

    tools = {}
    for name, value in cp.items("tools"):
        cx, cy, tw, th = _ints(value, 4)
        tools[ToolKind(name)] = Rect.around(Point(cx, cy), tw, th)

    colors, names = {}, {}
    for name, value in cp.items("colors"):
        hx, rest = value.split(None, 1)
        cx, cy, sw, sh = _ints(rest, 4)
        hx = hx.upper()
        colors[hx] = Rect.around(Point(cx, cy), sw, sh)
        names[hx] = name

    layout = UILayout(tools, colors, names, canvas, window, version)
    layout.validate()
    return layout


def dump_layout(layout: UILayout) -> str:
    lines = ["[layout]", f"version = {layout.version}", "", "[canvas]",
             f"origin = {layout.canvas.origin.x} {layout.canvas.origin.y}",
             f"size = {layout.canvas.width} {layout.canvas.height}",
             f"background = {layout.canvas.background}", "", "[window]",
             "rect = %g %g %g %g" % (layout.window.x0, layout.window.y0, layout.window.x1, layout.window.y1),
             "", "[tools]"]
    for tool, r in layout.tool_hits.items():
        cx, cy = r.centroid
        lines.append(f"{tool.value} = {cx:g} {cy:g} {r.width:g} {r.height:g}")
    lines += ["", "[colors]"]
    for hx, r in layout.color_hits.items():
        cx, cy = r.centroid
        lines.append(f"{layout.color_name(hx)} = {hx} {cx:g} {cy:g} {r.width:g} {r.height:g}")
    return "\n".join(lines) + "\n"


# -- operations ------------------------------------------------------------

def bbox_union(rects: Iterable[Rect]) -> Optional[Rect]:
    rects = list(rects)
    if not rects:
        return None
    return Rect(min(r.x0 for r in rects), min(r.y0 for r in rects),
                max(r.x1 for r in rects), max(r.y1 for r in rects))


def coverage(content_bbox: Optional[Rect], canvas: CanvasSpec) -> float:
    """Area of the content bbox (clipped to the canvas) over the canvas area."""
    if content_bbox is None:
        return 0.0
    clipped = content_bbox.clip(canvas.rect)
    if clipped is None:
        return 0.0
    local = clipped.translate(-canvas.origin.x, -canvas.origin.y)
    return local.area / canvas.area


def region_rect(kind: Union[RegionKind, str], canvas: CanvasSpec) -> Union[Rect, list[Rect]]:
    """Screen-space target region(s) for a position constraint.

    ``corners`` returns four rects ordered top-left, top-right,
    bottom-left, bottom-right.
    """
    kind = RegionKind(kind)
    c = canvas.rect
    w, h = canvas.width, canvas.height
    if kind is RegionKind.CENTER:
        cx, cy = c.centroid
        return Rect(cx - 0.1 * w, cy - 0.1 * h, cx + 0.1 * w, cy + 0.1 * h)
    mx, my = c.x0 + w / 2, c.y0 + h / 2
    if kind is RegionKind.TOP_LEFT:
        return Rect(c.x0, c.y0, mx, my)
    if kind is RegionKind.TOP_RIGHT:
        return Rect(mx, c.y0, c.x1, my)
    if kind is RegionKind.BOTTOM_LEFT:
        return Rect(c.x0, my, mx, c.y1)
    if kind is RegionKind.BOTTOM_RIGHT:
        return Rect(mx, my, c.x1, c.y1)
    cw, ch = 0.25 * w, 0.25 * h
    return [
        Rect(c.x0, c.y0, c.x0 + cw, c.y0 + ch),
        Rect(c.x1 - cw, c.y0, c.x1, c.y0 + ch),
        Rect(c.x0, c.y1 - ch, c.x0 + cw, c.y1),
        Rect(c.x1 - cw, c.y1 - ch, c.x1, c.y1),
    ]


def hit_test(layout: UILayout, p: Point) -> Hit:
    for tool, r in layout.tool_hits.items():
        if r.contains(p.x, p.y):
            return Hit(HitKind.TOOL, tool.value)
    for hx, r in layout.color_hits.items():
        if r.contains(p.x, p.y):
            return Hit(HitKind.COLOR, hx)
    if layout.canvas.rect.contains(p.x, p.y):
        return Hit(HitKind.CANVAS)
    if layout.window.contains_closed(p.x, p.y):
        return Hit(HitKind.WINDOW)
    return Hit(HitKind.OUT)
