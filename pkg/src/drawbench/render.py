"""SVG rendering of drawing traces for human inspection."""
from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .geometry import CanvasSpec, ToolKind
from .interpreter import Dot, DrawingTrace, FillEvent, Shape, Stroke


def _n(v: float) -> str:
    return f"{v:g}"


def render_svg(trace: DrawingTrace, canvas: CanvasSpec = CanvasSpec()) -> str:
    ox, oy = canvas.origin.x, canvas.origin.y
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{canvas.width}" height="{canvas.height}" '
        f'viewBox="0 0 {canvas.width} {canvas.height}">',
        f'  <rect class="background" x="0" y="0" width="{canvas.width}" height="{canvas.height}" '
        f'fill={quoteattr(canvas.background)} stroke="#000000" stroke-width="1"/>',
    ]
    for el in trace.elements:
        if isinstance(el, Stroke):
            color = canvas.background if el.tool is ToolKind.ERASER else el.color
            pts = " ".join(f"{_n(p.x - ox)},{_n(p.y - oy)}" for p in el.vertices)
            out.append(f'  <polyline class="{el.tool.value}" points="{pts}" fill="none" '
                       f'stroke={quoteattr(color)} stroke-width="{el.size}" '
                       'stroke-linecap="round" stroke-linejoin="round"/>')
        elif isinstance(el, Shape):
            b = el.bbox.translate(-ox, -oy)
            stroke = f'fill="none" stroke={quoteattr(el.color)} stroke-width="{el.size}"'
            if el.tool is ToolKind.LINE:
                out.append(f'  <line x1="{_n(el.anchor.x - ox)}" y1="{_n(el.anchor.y - oy)}" '
                           f'x2="{_n(el.target.x - ox)}" y2="{_n(el.target.y - oy)}" {stroke}/>')
            elif el.tool is ToolKind.RECTANGLE:
                out.append(f'  <rect x="{_n(b.x0)}" y="{_n(b.y0)}" width="{_n(b.width)}" '
                           f'height="{_n(b.height)}" {stroke}/>')
            else:
                cx, cy = b.centroid
                out.append(f'  <ellipse cx="{_n(cx)}" cy="{_n(cy)}" rx="{_n(b.width / 2)}" '
                           f'ry="{_n(b.height / 2)}" {stroke}/>')
        elif isinstance(el, Dot):
            color = canvas.background if el.tool is ToolKind.ERASER else el.color
            out.append(f'  <circle class="dot" cx="{_n(el.point.x - ox)}" cy="{_n(el.point.y - oy)}" '
                       f'r="{_n(el.size / 2)}" fill={quoteattr(color)}/>')
        elif isinstance(el, FillEvent):
            out.append(f'  <circle class="fill" cx="{_n(el.point.x - ox)}" cy="{_n(el.point.y - oy)}" '
                       f'r="6" fill={quoteattr(el.color)} stroke="#000000" stroke-dasharray="2,2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
