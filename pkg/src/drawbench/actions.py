"""Parsing and serialization of the four-instruction mouse-action language.

Wire format is a JSON array of objects::

    [{"action": "moveTo", "x": 35, "y": 45}, {"action": "click"}, ...]
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

ACTION_KINDS = ("moveTo", "click", "mouseDown", "mouseUp")
MAX_ACTIONS = 10_000

_decoder = json.JSONDecoder()


class SyntaxFailure(ValueError):
    """Raised when text does not contain a valid action array.

    ``reason`` is one of ``malformed-document``, ``unknown-action-kind``,
    ``missing-field`` or ``non-integer-coordinate``.
    """

    def __init__(self, reason: str, message: str, position: Optional[int] = None,
                 action_index: Optional[int] = None):
        self.reason = reason
        self.message = message
        self.position = position
        self.action_index = action_index
        super().__init__(f"{reason}: {message}")


@dataclass(frozen=True)
class Action:
    kind: str
    x: Optional[int] = None
    y: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {self.kind!r}")
        has_xy = self.x is not None and self.y is not None
        if self.kind == "moveTo" and not has_xy:
            raise ValueError("moveTo needs x and y")
        if self.kind != "moveTo" and (self.x is not None or self.y is not None):
            raise ValueError(f"{self.kind} takes no coordinates")

    @classmethod
    def move(cls, x: int, y: int) -> "Action":
        return cls("moveTo", x, y)

    def to_dict(self) -> dict:
        if self.kind == "moveTo":
            return {"action": self.kind, "x": self.x, "y": self.y}
        return {"action": self.kind}


CLICK = Action("click")
DOWN = Action("mouseDown")
UP = Action("mouseUp")


@dataclass(frozen=True)
class ActionSequence:
    actions: tuple[Action, ...]
    source_text: str = ""

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def __getitem__(self, i):
        return self.actions[i]

    def __eq__(self, other) -> bool:
        # source text is provenance, not identity
        if not isinstance(other, ActionSequence):
            return NotImplemented
        return self.actions == other.actions

    def __hash__(self) -> int:
        return hash(self.actions)


def _coordinate(value, field: str, index: int, pos: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        if value is None:
            raise SyntaxFailure("missing-field", f"action {index}: '{field}' is null", pos, index)
        raise SyntaxFailure("non-integer-coordinate",
                            f"action {index}: '{field}' is {type(value).__name__}, not an integer", pos, index)
    if isinstance(value, float):
        if not math.isfinite(value) or not value.is_integer():
            raise SyntaxFailure("non-integer-coordinate", f"action {index}: '{field}'={value!r}", pos, index)
        value = int(value)
    return value


def _validate(items: list, pos: int) -> tuple[Action, ...]:
    if len(items) > MAX_ACTIONS:
        raise SyntaxFailure("malformed-document", f"{len(items)} actions exceeds the cap of {MAX_ACTIONS}", pos)
    out = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise SyntaxFailure("malformed-document", f"action {i} is not an object", pos, i)
        if "action" not in item:
            raise SyntaxFailure("missing-field", f"action {i} has no 'action' field", pos, i)
        kind = item["action"]
        if kind not in ACTION_KINDS:
            raise SyntaxFailure("unknown-action-kind", f"action {i}: unknown kind {kind!r}", pos, i)
        if kind == "moveTo":
            for f in ("x", "y"):
                if f not in item:
                    raise SyntaxFailure("missing-field", f"action {i}: moveTo without '{f}'", pos, i)
            out.append(Action(kind, _coordinate(item["x"], "x", i, pos), _coordinate(item["y"], "y", i, pos)))
        else:
            # stray coordinates on click/mouseDown/mouseUp are ignored
            out.append(Action(kind))
    return tuple(out)


def parse_actions(text: str) -> ActionSequence:
    """Extract and validate the first action array in ``text``.

    Surrounding prose and code fences are tolerated. The first ``[`` that
    opens a complete JSON array which is empty or holds at least one object
    is taken as the document; arrays of bare numbers (e.g. ``[35, 45]`` in
    prose) are skipped.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    start = text.find("[")
    while start != -1:
        try:
            value, _ = _decoder.raw_decode(text, start)
        except (ValueError, RecursionError):
            value = None
        if isinstance(value, list) and (not value or any(isinstance(v, dict) for v in value)):
            return ActionSequence(_validate(value, start), text)
        start = text.find("[", start + 1)
    raise SyntaxFailure("malformed-document", "no complete JSON array of action objects found", 0)


def serialize_actions(seq) -> str:
    """Canonical text: one action object per line, two-space indent."""
    actions = seq.actions if isinstance(seq, ActionSequence) else tuple(seq)
    if not actions:
        return "[]"
    body = ",\n".join("  " + json.dumps(a.to_dict()) for a in actions)
    return "[\n" + body + "\n]"


def sequence(actions, source_text: str = "") -> ActionSequence:
    return ActionSequence(tuple(actions), source_text)
