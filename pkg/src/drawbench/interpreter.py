"""Headless execution of action sequences against the canvas UI state machine."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from .actions import ActionSequence
from .geometry import (
    DEFAULT_LAYOUT,
    FREEHAND_TOOLS,
    SHAPE_TOOLS,
    HitKind,
    Point,
    Rect,
    ToolKind,
    UILayout,
    bbox_union,
    coverage,
    hit_test,
)

BRUSH_SIZES = (2, 5, 10)

DIAGNOSTIC_KINDS = (
    "unmatched-down",
    "unmatched-up",
    "out-of-window-move",
    "off-canvas-press",
    "degenerate-shape",
)


@dataclass(frozen=True)
class BrushState:
    tool: ToolKind = ToolKind.PEN
    color: str = "#000000"
    size: int = 2
    cursor: Point = Point(0, 0)
    button_down: bool = False
    stroke_start: Optional[Point] = None


@dataclass(frozen=True)
class Stroke:
    tool: ToolKind
    color: str
    size: int
    vertices: tuple[Point, ...]
    bbox: Rect


@dataclass(frozen=True)
class Shape:
    tool: ToolKind
    color: str
    size: int
    anchor: Point
    target: Point
    bbox: Rect


@dataclass(frozen=True)
class Dot:
    point: Point
    tool: ToolKind
    color: str
    size: int = 2


@dataclass(frozen=True)
class FillEvent:
    point: Point
    color: str


@dataclass(frozen=True)
class ToolSelect:
    tool: ToolKind


@dataclass(frozen=True)
class ColorSelect:
    color: str


TraceElement = Union[Stroke, Shape, Dot, FillEvent, ToolSelect, ColorSelect]
DRAWING_ELEMENTS = (Stroke, Shape, Dot, FillEvent)


@dataclass(frozen=True)
class ExecutionDiagnostic:
    kind: str
    action_index: int
    detail: str = ""


@dataclass(frozen=True)
class DrawingTrace:
    elements: tuple[TraceElement, ...] = ()
    diagnostics: tuple[ExecutionDiagnostic, ...] = ()
    final_state: BrushState = BrushState()
    action_count: int = 0
    # last element was a press still open at the end, closed at the final cursor
    open_at_end: bool = False

    def drawing_elements(self) -> list:
        return [e for e in self.elements if isinstance(e, DRAWING_ELEMENTS)]


def element_bbox(el) -> Optional[Rect]:
    if isinstance(el, (Stroke, Shape)):
        return el.bbox
    if isinstance(el, (Dot, FillEvent)):
        return Rect(el.point.x, el.point.y, el.point.x, el.point.y)
    return None


def is_content(el) -> bool:
    """Elements that put paint on the canvas; eraser marks do not count."""
    if isinstance(el, (Stroke, Dot)):
        return el.tool is not ToolKind.ERASER
    return isinstance(el, (Shape, FillEvent))


class _Machine:
    def __init__(self, layout: UILayout):
        self.layout = layout
        self.canvas_rect = layout.canvas.rect
        self.state = BrushState()
        self.elements: list = []
        self.diagnostics: list[ExecutionDiagnostic] = []
        self.vertices: list[Point] = []
        self.press_index: Optional[int] = None
        self.press_tool = ToolKind.PEN
        self.press_color = "#000000"
        self.press_size = 2
        self.off_canvas_press = False

    def diag(self, kind: str, index: int, detail: str = "") -> None:
        self.diagnostics.append(ExecutionDiagnostic(kind, index, detail))

    def clipped(self, rect: Rect) -> Rect:
        c = rect.clip(self.canvas_rect)
        if c is None:
            # outside the canvas entirely: collapse onto the nearest canvas point
            x, y = self.canvas_rect.clamp_point(rect.x0, rect.y0)
            c = Rect(x, y, x, y)
        return c

    def move(self, i: int, x: int, y: int) -> None:
        w = self.layout.window
        if not w.contains_closed(x, y):
            cx, cy = w.clamp_point(x, y)
            self.diag("out-of-window-move", i, f"moveTo({x}, {y}) clamped to ({cx:g}, {cy:g})")
            x, y = int(cx), int(cy)
        p = Point(x, y)
        self.state = replace(self.state, cursor=p)
        if self.state.button_down and self.press_tool in FREEHAND_TOOLS:
            self.vertices.append(p)

    def click(self, i: int) -> None:
        st = self.state
        hit = hit_test(self.layout, st.cursor)
        if hit.kind is HitKind.TOOL:
            tool = ToolKind(hit.target)
            self.state = replace(st, tool=tool)
            self.elements.append(ToolSelect(tool))
        elif hit.kind is HitKind.COLOR:
            self.state = replace(st, color=hit.target)
            self.elements.append(ColorSelect(hit.target))
        elif hit.kind is HitKind.CANVAS:
            if st.tool in FREEHAND_TOOLS:
                self.elements.append(Dot(st.cursor, st.tool, st.color, st.size))
            elif st.tool is ToolKind.FILL:
                self.elements.append(FillEvent(st.cursor, st.color))
            else:
                self.diag("degenerate-shape", i, f"click with {st.tool.value} tool draws nothing")

    def down(self, i: int) -> None:
        st = self.state
        if st.button_down:
            self.diag("unmatched-down", i, "mouseDown while the button is already down")
            return
        if hit_test(self.layout, st.cursor).kind is not HitKind.CANVAS:
            self.diag("off-canvas-press", i, f"mouseDown at ({st.cursor.x}, {st.cursor.y}) is off the canvas")
            self.off_canvas_press = True
            return
        self.state = replace(st, button_down=True, stroke_start=st.cursor)
        self.off_canvas_press = False
        self.press_index = i
        self.press_tool, self.press_color, self.press_size = st.tool, st.color, st.size
        self.vertices = [st.cursor]

    def up(self, i: Optional[int]) -> None:
        st = self.state
        if not st.button_down:
            if self.off_canvas_press:
                self.off_canvas_press = False
            elif i is not None:
                self.diag("unmatched-up", i, "mouseUp without a preceding mouseDown")
            return
        tool = self.press_tool
        if tool in FREEHAND_TOOLS:
            verts = tuple(self.vertices)
            self.elements.append(Stroke(tool, self.press_color, self.press_size, verts,
                                        self.clipped(Rect.from_points(verts))))
        elif tool in SHAPE_TOOLS:
            anchor, target = st.stroke_start, st.cursor
            self.elements.append(Shape(tool, self.press_color, self.press_size, anchor, target,
                                       self.clipped(Rect.from_points([anchor, target]))))
        else:
            # fill tool drag: acts as a fill at the press point
            self.elements.append(FillEvent(st.stroke_start, self.press_color))
        self.state = replace(st, button_down=False, stroke_start=None)
        self.vertices = []
        self.press_index = None

    def finish(self) -> bool:
        open_at_end = self.state.button_down
        if open_at_end:
            self.diag("unmatched-down", self.press_index, "mouseDown never released; closed at final cursor")
            self.up(None)
        self.off_canvas_press = False
        return open_at_end


def interpret(seq: ActionSequence, layout: UILayout = DEFAULT_LAYOUT) -> DrawingTrace:
    m = _Machine(layout)
    for i, a in enumerate(seq.actions):
        if a.kind == "moveTo":
            m.move(i, a.x, a.y)
        elif a.kind == "click":
            m.click(i)
        elif a.kind == "mouseDown":
            m.down(i)
        else:
            m.up(i)
    open_at_end = m.finish()
    return DrawingTrace(tuple(m.elements), tuple(m.diagnostics), m.state, len(seq.actions), open_at_end)


@dataclass(frozen=True)
class TraceStats:
    tools_used: frozenset = frozenset()
    colors_used: frozenset = frozenset()
    segments: int = 0
    content_bbox: Optional[Rect] = None
    coverage: float = 0.0
    action_count: int = 0

    def to_dict(self) -> dict:
        bb = self.content_bbox
        return {
            "tools_used": sorted(str(t) for t in self.tools_used),
            "colors_used": sorted(self.colors_used),
            "segments": self.segments,
            "content_bbox": None if bb is None else [bb.x0, bb.y0, bb.x1, bb.y1],
            "coverage": self.coverage,
            "action_count": self.action_count,
        }


def trace_stats(trace: DrawingTrace, layout: UILayout = DEFAULT_LAYOUT,
                strict_tools: bool = False) -> TraceStats:
    """Summary figures the criteria are checked against.

    With ``strict_tools`` a tool counts as used only if it was selected and
    then produced at least one drawing element.
    """
    selected = {e.tool for e in trace.elements if isinstance(e, ToolSelect)}
    drawn = trace.drawing_elements()
    if strict_tools:
        drew = {ToolKind.FILL if isinstance(e, FillEvent) else e.tool for e in drawn}
        tools = selected & drew
    else:
        tools = selected
    colors = {e.color for e in trace.elements if isinstance(e, ColorSelect)}
    colors |= {e.color for e in drawn if is_content(e)}
    content = [element_bbox(e) for e in drawn if is_content(e)]
    bbox = bbox_union(content)
    return TraceStats(
        tools_used=frozenset(tools),
        colors_used=frozenset(colors),
        segments=len(drawn),
        content_bbox=bbox,
        coverage=coverage(bbox, layout.canvas),
        action_count=trace.action_count,
    )
