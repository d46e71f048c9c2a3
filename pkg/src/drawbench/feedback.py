"""Structured corrective feedback rendered from an evaluation report."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .geometry import DEFAULT_LAYOUT, SHAPE_TOOLS, RegionKind, ToolKind, UILayout, region_rect
from .evaluator import CriteriaSpec, EvaluationReport

ITEM_INDENT = "     "

_TOOL_ADVICE = {
    ToolKind.PEN: "Use the pen tool for free-form strokes.",
    ToolKind.ERASER: "Use the eraser tool to remove unwanted content.",
    ToolKind.FILL: "Use the fill tool to color enclosed areas.",
}


@dataclass
class FeedbackDocument:
    header: str
    error_items: list[str] = field(default_factory=list)
    warning_items: list[str] = field(default_factory=list)
    suggestion_items: list[str] = field(default_factory=list)
    missing_criteria: list[str] = field(default_factory=list)
    current_stats: list[str] = field(default_factory=list)
    met_items: list[str] = field(default_factory=list)
    closing: str = ""

    @property
    def text(self) -> str:
        return render_feedback(feedback_record(self))


def _numbered(title: str, items: list[str]) -> str:
    lines = [title]
    for n, item in enumerate(items, 1):
        first, *rest = item.split("\n")
        lines.append(f"  {n}. {first}")
        lines.extend(ITEM_INDENT + r for r in rest)
    return "\n".join(lines)


def render_feedback(record: dict) -> str:
    blocks = [record["header"]]
    if record["met"]:
        blocks.append("\n".join(["All criteria met:"] + [f"  + {m}" for m in record["met"]]))
    if record["errors"]:
        blocks.append(_numbered("ERRORS:", record["errors"]))
    if record["warnings"]:
        blocks.append(_numbered("WARNINGS:", record["warnings"]))
    if record["suggestions"]:
        blocks.append(_numbered("SUGGESTIONS:", record["suggestions"]))
    if record["missing_criteria"]:
        blocks.append("\n".join(["MISSING CRITERIA:"] + [f"  - {m}" for m in record["missing_criteria"]]))
    if record["current_stats"]:
        blocks.append("\n".join(["CURRENT STATS:"] + [f"  - {s}" for s in record["current_stats"]]))
    if record["closing"]:
        blocks.append(record["closing"])
    return "\n\n".join(blocks) + "\n"


def feedback_record(doc: FeedbackDocument) -> dict:
    d = asdict(doc)
    return {
        "header": d["header"],
        "errors": d["error_items"],
        "warnings": d["warning_items"],
        "suggestions": d["suggestion_items"],
        "missing_criteria": d["missing_criteria"],
        "current_stats": d["current_stats"],
        "met": d["met_items"],
        "closing": d["closing"],
    }


def document_from_record(record: dict) -> FeedbackDocument:
    return FeedbackDocument(record["header"], list(record["errors"]), list(record["warnings"]),
                            list(record["suggestions"]), list(record["missing_criteria"]),
                            list(record["current_stats"]), list(record["met"]), record["closing"])


def _strlist(items) -> str:
    return repr(sorted(str(i) for i in items))


def _region_text(kind: RegionKind, layout: UILayout) -> str:
    if kind is RegionKind.CORNERS:
        rs = region_rect(kind, layout.canvas)
        return ", ".join(f"x {r.x0:g}-{r.x1:g} y {r.y0:g}-{r.y1:g}" for r in rs)
    r = region_rect(kind, layout.canvas)
    return f"x {r.x0:g}-{r.x1:g}, y {r.y0:g}-{r.y1:g}"


def _criterion_errors(report: EvaluationReport, spec: CriteriaSpec, layout: UILayout) -> list[str]:
    items = []
    st = report.stats
    for c in report.missing_criteria:
        if c.id == "required_tools":
            for t in c.missing:
                p = layout.tool_center(t)
                items.append(f"Required tool '{t}' was not used.\n"
                             f"Select it by clicking at coordinates ({p.x}, {p.y}).")
        elif c.id == "required_colors":
            for hx in c.missing:
                p = layout.color_center(hx)
                items.append(f"Required color '{layout.color_name(hx)}' was not used.\n"
                             f"Select it by clicking at coordinates ({p.x}, {p.y}).")
        elif c.id == "min_segments":
            items.append(f"Only {st.segments} drawing segment(s) found; at least {spec.min_segments} required.\n"
                         "Draw each part with mouseDown, moveTo and mouseUp on the canvas.")
        elif c.id == "position_constraint":
            kind = spec.position_constraint
            if kind is RegionKind.CORNERS:
                items.append("Not every corner of the canvas contains a drawn element.\n"
                             f"Draw one element inside each corner region ({_region_text(kind, layout)}).")
            else:
                items.append(f"Drawing is not positioned at the {kind.value} of the canvas.\n"
                             f"Place its center inside {_region_text(kind, layout)}.")
        elif c.id == "size_constraint":
            sc = spec.size_constraint
            got = "nothing" if st.content_bbox is None else \
                f"{st.content_bbox.width:g}x{st.content_bbox.height:g}"
            items.append(f"Drawing size {got} does not match the required {sc.width:g}x{sc.height:g} "
                         f"(tolerance {sc.rel_tolerance:.0%}).\n"
                         f"Adjust the drag so the drawing spans {sc.width:g}x{sc.height:g} pixels.")
        elif c.id == "corner_placement":
            items.append("Not every corner of the canvas contains a drawn element.\n"
                         f"Draw one element inside each corner region "
                         f"({_region_text(RegionKind.CORNERS, layout)}).")
    return items


def _error_item(e, layout: UILayout) -> str:
    w, c = layout.window, layout.canvas.rect
    where = "" if e.action_index is None else f"Action {e.action_index}: "
    if e.kind == "SYNTAX_ERROR":
        return (f"{e.message}.\n"
                'Return a JSON array of objects such as {"action": "moveTo", "x": 100, "y": 100}.')
    if e.kind == "COORDINATE_ERROR":
        return (f"{where}{e.message}.\n"
                f"Keep the cursor within ({w.x0:g}-{w.x1:g}, {w.y0:g}-{w.y1:g}) "
                f"and press only on the canvas ({c.x0:g}-{c.x1:g}, {c.y0:g}-{c.y1:g}).")
    if e.kind == "LOGIC_ERROR":
        return f"{where}{e.message}.\nPair every mouseDown with exactly one mouseUp."
    return f"Too many actions: {e.message}.\nRemove redundant moves and tool switches."


def _missing_line(c, spec: CriteriaSpec) -> str:
    if c.id in ("required_tools", "required_colors"):
        return f"{c.id}: {_strlist(c.missing)}"
    if c.id == "min_segments":
        return f"min_segments: {c.expected} (found {c.actual})"
    if c.id == "min_coverage":
        return f"min_coverage: {c.expected:.2f} (found {c.actual:.2f})"
    if c.id == "max_actions":
        return f"max_actions: {c.expected} (found {c.actual})"
    if c.id == "position_constraint":
        return f"position_constraint: {c.expected}"
    if c.id == "size_constraint":
        sc = spec.size_constraint
        return f"size_constraint: {sc.width:g}x{sc.height:g}"
    if c.id == "corner_placement":
        return "corner_placement: all four corners"
    if c.id == "syntax_validity":
        return "syntax_validity: valid JSON action array"
    return "coordinate_bounds: all coordinates within bounds"


def _met_lines(spec: CriteriaSpec) -> list[str]:
    lines = []
    if spec.required_tools is not None:
        lines.append(f"Required tools: {_strlist(t.value for t in spec.required_tools)}")
    if spec.required_colors is not None:
        lines.append(f"Required colors: {_strlist(spec.required_colors)}")
    if spec.min_segments is not None:
        lines.append(f"Minimum segments: {spec.min_segments}")
    if spec.min_coverage is not None:
        lines.append(f"Minimum coverage: {spec.min_coverage:.2f}")
    if spec.max_actions is not None:
        lines.append(f"Maximum actions: {spec.max_actions}")
    if spec.position_constraint is not None:
        lines.append(f"Position constraint: {spec.position_constraint.value}")
    if spec.size_constraint is not None:
        lines.append(f"Size constraint: {spec.size_constraint.width:g}x{spec.size_constraint.height:g}")
    if spec.corner_placement:
        lines.append("Corner placement: all four corners")
    lines.append("No errors detected")
    return lines


def generate_feedback(report: EvaluationReport, spec: CriteriaSpec,
                      layout: UILayout = DEFAULT_LAYOUT) -> FeedbackDocument:
    st = report.stats
    missing = {c.id: c for c in report.missing_criteria}

    errors = _criterion_errors(report, spec, layout)
    errors += [_error_item(e, layout) for e in report.errors if e.kind != "EFFICIENCY_WARNING"]
    warnings = []
    if "min_coverage" in missing:
        warnings.append(f"Drawing is too small (coverage: {st.coverage:.2f}).\n"
                        "Consider using larger coordinates to cover more canvas area.")
    warnings += [_error_item(e, layout) for e in report.errors if e.kind == "EFFICIENCY_WARNING"]

    perfect = not missing and not errors and not warnings
    score_text = f"Score: {report.score:.2f}/1.00 - "
    if perfect:
        sentence = "Excellent! Perfect score!" if report.score >= 1 else f"{report.grade}!"
        return FeedbackDocument(header=score_text + sentence, met_items=_met_lines(spec),
                                closing="Great job! No improvements needed.")

    counts = []
    if errors:
        counts.append(f"{len(errors)} error(s)")
    if warnings:
        counts.append(f"{len(warnings)} warning(s)")
    header = f"{score_text}{report.grade}!"
    if counts:
        header += " " + " and ".join(counts) + " found."

    suggestions = []
    if "required_tools" in missing:
        for t in missing["required_tools"].missing:
            tool = ToolKind(t)
            suggestions.append(f"Use the {t} tool for more efficient shape creation."
                               if tool in SHAPE_TOOLS else _TOOL_ADVICE[tool])
    if "min_coverage" in missing:
        suggestions.append(f"Aim for at least {spec.min_coverage:.2f} coverage of the canvas.")
    elif st.coverage >= 0.40:
        suggestions.append(f"Drawing coverage is good ({st.coverage:.2f}).")
    checked = [n for n, cid in (("tools", "required_tools"), ("colors", "required_colors"))
               if getattr(spec, cid) is not None]
    if checked and not any(f"required_{n}" in missing for n in checked):
        suggestions.append(f"All required {' and '.join(checked)} were correctly used.")

    stats_lines = []
    if report.score < 1:
        stats_lines = [
            f"Tools used: {_strlist(t.value for t in st.tools_used)}",
            f"Colors used: {_strlist(st.colors_used)}",
            f"Segments: {st.segments}",
            f"Coverage: {st.coverage:.2f}",
        ]
    return FeedbackDocument(
        header=header,
        error_items=errors,
        warning_items=warnings,
        suggestion_items=suggestions,
        missing_criteria=[_missing_line(c, spec) for c in report.missing_criteria],
        current_stats=stats_lines,
    )
