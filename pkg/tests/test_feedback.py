import dataclasses

import pytest
from hypothesis import given, strategies as st

from drawbench.actions import Action, sequence, serialize_actions
from drawbench.evaluator import CriteriaSpec, evaluate
from drawbench.feedback import (
    FeedbackDocument,
    document_from_record,
    feedback_record,
    generate_feedback,
    render_feedback,
)
from conftest import worked_text

# A large pen-drawn red rectangle outline: 600x490 px -> coverage 0.42.
BIG_PEN = serialize_actions(sequence([
    Action.move(35, 45), Action("click"),
    Action.move(429, 25), Action("click"),
    Action.move(200, 150), Action("mouseDown"),
    Action.move(800, 150), Action.move(800, 640), Action.move(200, 640), Action.move(200, 150),
    Action("mouseUp"),
]))


def _with_score(report, score):
    return dataclasses.replace(report, score_ratio=score, mode="ratio")


def test_missing_tool_document():
    spec = CriteriaSpec(required_tools={"rectangle"}, required_colors={"red"}, min_segments=1, min_coverage=0.3)
    report = evaluate(BIG_PEN, spec)
    assert report.stats.coverage == pytest.approx(0.42)
    doc = generate_feedback(_with_score(report, 0.75), spec)
    assert doc.text == (
        "Score: 0.75/1.00 - Good attempt! 1 error(s) found.\n"
        "\n"
        "ERRORS:\n"
        "  1. Required tool 'rectangle' was not used.\n"
        "     Select it by clicking at coordinates (35, 365).\n"
        "\n"
        "SUGGESTIONS:\n"
        "  1. Use the rectangle tool for more efficient shape creation.\n"
        "  2. Drawing coverage is good (0.42).\n"
        "\n"
        "MISSING CRITERIA:\n"
        "  - required_tools: ['rectangle']\n"
        "\n"
        "CURRENT STATS:\n"
        "  - Tools used: ['pen']\n"
        "  - Colors used: ['#FF0000']\n"
        "  - Segments: 1\n"
        "  - Coverage: 0.42\n"
    )
    rec = feedback_record(doc)
    assert len(rec["errors"]) == 1 and len(rec["missing_criteria"]) == 1


def test_insufficient_coverage_document():
    # 3 short red pen strokes, coverage 0.12
    acts = [Action.move(35, 45), Action("click"), Action.move(429, 25), Action("click")]
    for y in (300, 440, 580):
        acts += [Action.move(400, y), Action("mouseDown"), Action.move(700, y), Action("mouseUp")]
    spec = CriteriaSpec(required_tools={"pen"}, required_colors={"red"}, min_segments=3, min_coverage=0.3,
                        position_constraint="center")
    report = evaluate(serialize_actions(sequence(acts)), spec)
    assert report.stats.coverage == pytest.approx(0.12)
    doc = generate_feedback(report, spec)
    assert report.score == 0.8
    assert doc.warning_items == ["Drawing is too small (coverage: 0.12).\n"
                                 "Consider using larger coordinates to cover more canvas area."]
    assert doc.suggestion_items == ["Aim for at least 0.30 coverage of the canvas.",
                                    "All required tools and colors were correctly used."]
    assert doc.current_stats == ["Tools used: ['pen']", "Colors used: ['#FF0000']", "Segments: 3", "Coverage: 0.12"]
    assert doc.header == "Score: 0.80/1.00 - Good job! 1 warning(s) found."
    assert doc.error_items == []


def test_perfect_document():
    spec = CriteriaSpec(required_tools={"pen"}, required_colors={"#FF0000"}, min_segments=1, min_coverage=0.01,
                        position_constraint="center")
    report = evaluate(worked_text("d1"), spec)
    assert report.score == 1.0
    assert generate_feedback(report, spec).text == (
        "Score: 1.00/1.00 - Excellent! Perfect score!\n"
        "\n"
        "All criteria met:\n"
        "  + Required tools: ['pen']\n"
        "  + Required colors: ['#FF0000']\n"
        "  + Minimum segments: 1\n"
        "  + Minimum coverage: 0.01\n"
        "  + Position constraint: center\n"
        "  + No errors detected\n"
        "\n"
        "Great job! No improvements needed.\n"
    )


def test_missing_color_uses_palette_name():
    spec = CriteriaSpec(required_colors={"#00FF00"})
    doc = generate_feedback(evaluate(worked_text("d1"), spec), spec)
    assert doc.error_items == ["Required color 'green' was not used.\n"
                               "Select it by clicking at coordinates (453, 25)."]


def test_detected_errors_listed():
    spec = CriteriaSpec(min_segments=1)
    doc = generate_feedback(evaluate("not json at all", spec), spec)
    assert any("SYNTAX" in e or "JSON" in e or "syntax" in e for e in doc.error_items)
    assert doc.header.startswith("Score: 0.00/1.00 - Needs improvement!")


def test_efficiency_is_a_warning():
    spec = CriteriaSpec(min_segments=1)
    text = serialize_actions(sequence([Action.move(500, 500)] * 70))
    doc = generate_feedback(evaluate(text, spec), spec)
    assert len(doc.warning_items) == 1
    assert "1 warning(s)" in doc.header


item = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=30)
docs = st.builds(FeedbackDocument, header=item, error_items=st.lists(item, max_size=3),
                 warning_items=st.lists(item, max_size=3), suggestion_items=st.lists(item, max_size=3),
                 missing_criteria=st.lists(item, max_size=3), current_stats=st.lists(item, max_size=3),
                 met_items=st.lists(item, max_size=3), closing=item)


@given(docs)
def test_record_round_trip(doc):
    rec = feedback_record(doc)
    assert document_from_record(rec) == doc
    assert render_feedback(rec) == doc.text
