"""Turn prompts. The template is a versioned text asset so runs stay comparable."""
from __future__ import annotations

from importlib import resources
from string import Template
from typing import Optional

from ..actions import Action, serialize_actions
from ..dataset import TaskSpec
from ..feedback import FeedbackDocument
from ..geometry import DEFAULT_LAYOUT, UILayout

PROMPT_VERSION = "v1"

_EXAMPLE = (
    Action.move(35, 365), Action("click"), Action.move(477, 25), Action("click"),
    Action.move(400, 300), Action("mouseDown"), Action.move(700, 500), Action("mouseUp"),
)

_REVISION = """
YOUR PREVIOUS ATTEMPT
$previous

FEEDBACK
$feedback
Revise the action sequence to address the feedback. Respond with the complete corrected JSON array.
"""


def _template() -> Template:
    text = (resources.files("drawbench") / "data" / f"prompt_{PROMPT_VERSION}.txt").read_text("utf-8")
    return Template(text)


def build_prompt(task: TaskSpec, layout: UILayout = DEFAULT_LAYOUT, turn: int = 1,
                 feedback: Optional[FeedbackDocument] = None, previous: Optional[str] = None) -> str:
    if (turn == 2) != (feedback is not None):
        raise ValueError("feedback is required for turn 2 and only for turn 2")
    c, w = layout.canvas.rect, layout.window
    tools = "\n".join(f"  {t.value}: ({p.x}, {p.y})"
                      for t, p in ((t, layout.tool_center(t)) for t in layout.tool_hits))
    colors = "\n".join(f"  {layout.color_name(hx)} {hx}: ({p.x}, {p.y})"
                       for hx, p in ((hx, layout.color_center(hx)) for hx in layout.color_hits))
    revision = ""
    if turn == 2:
        revision = Template(_REVISION).substitute(previous=(previous or "").strip() or "(empty)",
                                                  feedback=feedback.text.rstrip("\n"))
    return _template().substitute(
        canvas_x0=f"{c.x0:g}", canvas_y0=f"{c.y0:g}", canvas_x1=f"{c.x1:g}", canvas_y1=f"{c.y1:g}",
        canvas_w=layout.canvas.width, canvas_h=layout.canvas.height, canvas_bg=layout.canvas.background,
        window_x0=f"{w.x0:g}", window_y0=f"{w.y0:g}", window_x1=f"{w.x1:g}", window_y1=f"{w.y1:g}",
        tools=tools, colors=colors, example=serialize_actions(_EXAMPLE),
        task_id=task.id, task_text=task.text, revision=revision,
    )
