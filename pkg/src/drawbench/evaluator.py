"""Rule-based scoring of drawing traces.

Two score formulas are always computed:

* ``ratio``: criteria met / criteria checked, plus per-occurrence error
  penalties, plus a small coverage/efficiency bonus, clamped to [0, 1].
* ``weighted``: sum(w_i * c_i) / sum(w_i) over every present criterion,
  including the syntax-validity and coordinate-bounds checks.

Arithmetic runs on :class:`fractions.Fraction` so that band edges such as
0.9 and hand-derived values such as 0.75 - 0.1 compare exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .actions import ActionSequence, SyntaxFailure, parse_actions
from .geometry import (
    DEFAULT_LAYOUT,
    PALETTE,
    RegionKind,
    ToolKind,
    UILayout,
    region_rect,
)
from .interpreter import DrawingTrace, TraceStats, element_bbox, interpret, is_content, trace_stats

SCORE_MODES = ("ratio", "weighted")
DEFAULT_EFFICIENCY_LIMIT = 60
BONUS = Fraction("0.05")
BONUS_COVERAGE = 0.40

# criterion ids in report order
CRITERIA = (
    "required_tools",
    "required_colors",
    "min_segments",
    "min_coverage",
    "max_actions",
    "position_constraint",
    "size_constraint",
    "corner_placement",
    "syntax_validity",
    "coordinate_bounds",
)
VALIDITY_CRITERIA = ("syntax_validity", "coordinate_bounds")

DEFAULT_WEIGHTS = {
    "required_tools": 0.20,
    "required_colors": 0.20,
    "min_segments": 0.15,
    "min_coverage": 0.10,
    "position_constraint": 0.15,
    "size_constraint": 0.10,
    "syntax_validity": 0.05,
    "coordinate_bounds": 0.05,
    # the two optional criteria; the eight above sum to 1.0
    "max_actions": 0.05,
    "corner_placement": 0.15,
}

ERROR_KINDS = {
    # kind: (severity, penalty)
    "SYNTAX_ERROR": ("critical", Fraction("-0.3")),
    "COORDINATE_ERROR": ("high", Fraction("-0.2")),
    "LOGIC_ERROR": ("medium", Fraction("-0.1")),
    "EFFICIENCY_WARNING": ("low", Fraction("-0.05")),
}

_DIAGNOSTIC_ERRORS = {
    "out-of-window-move": "COORDINATE_ERROR",
    "off-canvas-press": "COORDINATE_ERROR",
    "unmatched-down": "LOGIC_ERROR",
    "unmatched-up": "LOGIC_ERROR",
}


def _normalize_color(c: str) -> str:
    c = c.strip()
    if c.lower() in PALETTE:
        return PALETTE[c.lower()]
    if not c.startswith("#") or len(c) != 7:
        raise ValueError(f"bad color {c!r}")
    int(c[1:], 16)
    return c.upper()


@dataclass(frozen=True)
class SizeConstraint:
    width: float
    height: float
    rel_tolerance: float = 0.10


@dataclass(frozen=True)
class CriteriaSpec:
    required_tools: Optional[frozenset] = None
    required_colors: Optional[frozenset] = None
    min_segments: Optional[int] = None
    min_coverage: Optional[float] = None
    max_actions: Optional[int] = None
    position_constraint: Optional[RegionKind] = None
    size_constraint: Optional[SizeConstraint] = None
    corner_placement: Optional[bool] = None

    def __post_init__(self):
        if self.required_tools is not None:
            object.__setattr__(self, "required_tools", frozenset(ToolKind(t) for t in self.required_tools))
        if self.required_colors is not None:
            object.__setattr__(self, "required_colors",
                               frozenset(_normalize_color(c) for c in self.required_colors))
        if self.position_constraint is not None:
            object.__setattr__(self, "position_constraint", RegionKind(self.position_constraint))
        if isinstance(self.size_constraint, dict):
            object.__setattr__(self, "size_constraint", SizeConstraint(**self.size_constraint))

    def validate(self) -> None:
        """Raise ValueError describing the first bad threshold."""
        if not self.present():
            raise ValueError("empty-criteria: no criterion present")
        if self.required_tools is not None and not self.required_tools:
            raise ValueError("bad-threshold: required_tools is empty")
        if self.required_colors is not None and not self.required_colors:
            raise ValueError("bad-threshold: required_colors is empty")
        if self.min_segments is not None and (isinstance(self.min_segments, bool) or self.min_segments < 1):
            raise ValueError(f"bad-threshold: min_segments={self.min_segments}")
        if self.min_coverage is not None and not 0 < self.min_coverage <= 1:
            raise ValueError(f"bad-threshold: min_coverage={self.min_coverage}")
        if self.max_actions is not None and self.max_actions < 1:
            raise ValueError(f"bad-threshold: max_actions={self.max_actions}")
        sc = self.size_constraint
        if sc is not None and (sc.width <= 0 or sc.height <= 0 or not 0 < sc.rel_tolerance < 1):
            raise ValueError(f"bad-threshold: size_constraint={sc}")
        if self.corner_placement is False:
            raise ValueError("bad-threshold: corner_placement must be true when given")

    def present(self) -> list[str]:
        return [c for c in CRITERIA if c not in VALIDITY_CRITERIA and getattr(self, c) is not None]

    @classmethod
    def from_dict(cls, d: dict) -> "CriteriaSpec":
        unknown = set(d) - set(CRITERIA)
        if unknown:
            raise ValueError(f"bad-threshold: unknown criteria {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        out = {}
        for c in self.present():
            v = getattr(self, c)
            if c == "required_tools":
                v = sorted(t.value for t in v)
            elif c == "required_colors":
                v = sorted(v)
            elif c == "position_constraint":
                v = v.value
            elif c == "size_constraint":
                v = {"width": v.width, "height": v.height, "rel_tolerance": v.rel_tolerance}
            out[c] = v
        return out


@dataclass(frozen=True)
class CriterionResult:
    id: str
    satisfied: bool
    weight: float
    detail: str = ""
    expected: object = None
    actual: object = None
    missing: tuple = ()   # unmet members of a set-valued criterion


def _missing_record(c: CriterionResult) -> dict:
    d = {"id": c.id, "expected": c.expected, "actual": c.actual}
    if c.missing:
        d["missing"] = list(c.missing)
    return d


@dataclass(frozen=True)
class DetectedError:
    kind: str
    message: str
    action_index: Optional[int] = None

    @property
    def severity(self) -> str:
        return ERROR_KINDS[self.kind][0]

    @property
    def penalty(self) -> Fraction:
        return ERROR_KINDS[self.kind][1]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "severity": self.severity, "penalty": float(self.penalty),
                "message": self.message, "action_index": self.action_index}


# -- criteria ----------------------------------------------------------------

def _element_centroids(trace: DrawingTrace) -> list[tuple[float, float]]:
    return [element_bbox(e).centroid for e in trace.drawing_elements() if is_content(e)]


def _fmt_list(items) -> str:
    return repr(sorted(str(i) for i in items))


def check_criteria(stats: TraceStats, trace: DrawingTrace, spec: CriteriaSpec,
                   layout: UILayout = DEFAULT_LAYOUT, errors: list = (),
                   weights: Optional[dict] = None) -> list[CriterionResult]:
    """One result per criterion in ``spec`` plus the two validity checks."""
    weights = {**DEFAULT_WEIGHTS, **(weights or {})}
    canvas = layout.canvas
    out = []

    def add(cid, ok, detail, expected=None, actual=None, missing=()):
        out.append(CriterionResult(cid, bool(ok), weights[cid], detail, expected, actual, tuple(missing)))

    if spec.required_tools is not None:
        missing = spec.required_tools - stats.tools_used
        add("required_tools", not missing,
            f"missing {_fmt_list(missing)}" if missing else "all required tools used",
            sorted(t.value for t in spec.required_tools), sorted(t.value for t in stats.tools_used),
            sorted(t.value for t in missing))
    if spec.required_colors is not None:
        missing = spec.required_colors - stats.colors_used
        add("required_colors", not missing,
            f"missing {_fmt_list(missing)}" if missing else "all required colors used",
            sorted(spec.required_colors), sorted(stats.colors_used), sorted(missing))
    if spec.min_segments is not None:
        add("min_segments", stats.segments >= spec.min_segments,
            f"{stats.segments} segment(s), need {spec.min_segments}", spec.min_segments, stats.segments)
    if spec.min_coverage is not None:
        add("min_coverage", stats.coverage >= spec.min_coverage,
            f"coverage {stats.coverage:.2f}, need {spec.min_coverage:.2f}", spec.min_coverage, stats.coverage)
    if spec.max_actions is not None:
        add("max_actions", stats.action_count <= spec.max_actions,
            f"{stats.action_count} action(s), limit {spec.max_actions}", spec.max_actions, stats.action_count)
    if spec.position_constraint is not None:
        kind = spec.position_constraint
        if kind is RegionKind.CORNERS:
            ok = _all_corners(trace, layout)
            actual = "all corners" if ok else "corner missing"
        else:
            region = region_rect(kind, canvas)
            ok = stats.content_bbox is not None and region.contains(*stats.content_bbox.centroid)
            actual = None if stats.content_bbox is None else list(stats.content_bbox.centroid)
        add("position_constraint", ok, f"{kind.value}: {'met' if ok else 'not met'}", kind.value, actual)
    if spec.size_constraint is not None:
        sc = spec.size_constraint
        bb = stats.content_bbox
        if bb is None:
            ok, actual = False, None
        else:
            ok = (abs(bb.width - sc.width) <= sc.rel_tolerance * sc.width
                  and abs(bb.height - sc.height) <= sc.rel_tolerance * sc.height)
            actual = [bb.width, bb.height]
        add("size_constraint", ok, f"target {sc.width:g}x{sc.height:g} ±{sc.rel_tolerance:.0%}, got {actual}",
            [sc.width, sc.height], actual)
    if spec.corner_placement:
        ok = _all_corners(trace, layout)
        add("corner_placement", ok, "elements in all four corners" if ok else "a corner is empty", True, ok)

    kinds = {e.kind for e in errors}
    add("syntax_validity", "SYNTAX_ERROR" not in kinds, "valid action document")
    add("coordinate_bounds", "COORDINATE_ERROR" not in kinds, "coordinates within bounds")
    return out


def _all_corners(trace: DrawingTrace, layout: UILayout) -> bool:
    corners = region_rect(RegionKind.CORNERS, layout.canvas)
    cents = _element_centroids(trace)
    return all(any(r.contains(x, y) for x, y in cents) for r in corners)


# -- errors ------------------------------------------------------------------

def detect_errors(parsed: Union[ActionSequence, SyntaxFailure], trace: Optional[DrawingTrace],
                  spec: Optional[CriteriaSpec] = None, layout: UILayout = DEFAULT_LAYOUT) -> list[DetectedError]:
    if isinstance(parsed, SyntaxFailure):
        return [DetectedError("SYNTAX_ERROR", f"Invalid action document ({parsed.reason}): {parsed.message}",
                              parsed.action_index)]
    errors = []
    for d in trace.diagnostics:
        kind = _DIAGNOSTIC_ERRORS.get(d.kind)
        if kind:
            errors.append(DetectedError(kind, d.detail, d.action_index))
    limit = spec.max_actions if spec is not None and spec.max_actions is not None else DEFAULT_EFFICIENCY_LIMIT
    if len(parsed) > limit:
        errors.append(DetectedError("EFFICIENCY_WARNING",
                                    f"{len(parsed)} actions exceeds the limit of {limit}", limit))
    errors.sort(key=lambda e: (e.action_index is None, e.action_index or 0))
    return errors


# -- scores ------------------------------------------------------------------

def _clamp(x: Fraction) -> Fraction:
    return max(Fraction(0), min(Fraction(1), x))


def _frac(w: float) -> Fraction:
    return Fraction(repr(float(w)))


def score_ratio(criteria: list[CriterionResult], errors: list[DetectedError], stats: TraceStats) -> float:
    counted = [c for c in criteria if c.id not in VALIDITY_CRITERIA]
    if not counted:
        raise ValueError("no scorable criteria")
    met = Fraction(sum(c.satisfied for c in counted), len(counted))
    total = met + sum((e.penalty for e in errors), Fraction(0)) + bonus(errors, stats)
    return float(_clamp(total))


def bonus(errors: list[DetectedError], stats: TraceStats) -> Fraction:
    if stats.coverage >= BONUS_COVERAGE and not any(e.kind == "EFFICIENCY_WARNING" for e in errors):
        return BONUS
    return Fraction(0)


def score_weighted(criteria: list[CriterionResult]) -> float:
    if not criteria:
        raise ValueError("no criteria")
    num = sum((_frac(c.weight) for c in criteria if c.satisfied), Fraction(0))
    den = sum((_frac(c.weight) for c in criteria), Fraction(0))
    if den <= 0:
        raise ValueError("weights must be positive")
    return float(num / den)


GRADES = (
    (Fraction(9, 10), "Great"),
    (Fraction(8, 10), "Good job"),
    (Fraction(6, 10), "Good attempt"),
)


def grade(score: float) -> str:
    s = Fraction(repr(float(score)))
    if s >= 1:
        return "Excellent"
    for edge, name in GRADES:
        if s >= edge:
            return name
    return "Needs improvement"


# -- report --------------------------------------------------------------------

@dataclass
class EvaluationReport:
    criteria: list[CriterionResult]
    errors: list[DetectedError]
    stats: TraceStats
    score_ratio: float
    score_weighted: float
    mode: str
    bonus: float
    trace: Optional[DrawingTrace] = field(default=None, repr=False)
    sequence: Optional[ActionSequence] = field(default=None, repr=False)

    @property
    def score(self) -> float:
        return self.score_ratio if self.mode == "ratio" else self.score_weighted

    @property
    def grade(self) -> str:
        return grade(self.score)

    @property
    def missing_criteria(self) -> list[CriterionResult]:
        return [c for c in self.criteria if not c.satisfied]

    def count(self, kind: str) -> int:
        return sum(e.kind == kind for e in self.errors)

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "score_ratio": self.score_ratio,
            "score_weighted": self.score_weighted,
            "mode": self.mode,
            "grade": self.grade,
            "bonus": self.bonus,
            "criteria": [
                {"id": c.id, "satisfied": c.satisfied, "weight": c.weight, "detail": c.detail}
                for c in self.criteria
            ],
            "missing_criteria": [
                _missing_record(c) for c in self.missing_criteria
            ],
            "errors": [e.to_dict() for e in self.errors],
            "stats": self.stats.to_dict(),
        }


def evaluate(raw_output: Union[str, bytes, ActionSequence], spec: CriteriaSpec,
             layout: UILayout = DEFAULT_LAYOUT, mode: str = "ratio", *,
             strict_tools: bool = False, weights: Optional[dict] = None) -> EvaluationReport:
    """Parse, interpret and score one submission. Never raises on bad input text."""
    if mode not in SCORE_MODES:
        raise ValueError(f"mode must be one of {SCORE_MODES}")
    if isinstance(raw_output, ActionSequence):
        parsed = raw_output
    else:
        try:
            parsed = parse_actions(raw_output)
        except SyntaxFailure as exc:
            parsed = exc
    if isinstance(parsed, SyntaxFailure):
        trace, seq = DrawingTrace(), None
    else:
        trace, seq = interpret(parsed, layout), parsed
    stats = trace_stats(trace, layout, strict_tools=strict_tools)
    errors = detect_errors(parsed, trace, spec, layout)
    criteria = check_criteria(stats, trace, spec, layout, errors, weights)
    return EvaluationReport(
        criteria=criteria,
        errors=errors,
        stats=stats,
        score_ratio=score_ratio(criteria, errors, stats),
        score_weighted=score_weighted(criteria),
        mode=mode,
        bonus=float(bonus(errors, stats)),
        trace=trace,
        sequence=seq,
    )
