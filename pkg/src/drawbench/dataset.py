"""Task schema, loading/validation, and distribution statistics."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .evaluator import CriteriaSpec

SCHEMA_VERSION = 1

DIFFICULTIES = ("easy", "medium", "hard", "very_hard")

CATEGORIES = (
    "spatial_reasoning", "basic_shapes", "objects", "compositional", "patterns",
    "multi_color", "position", "size", "tool_usage", "efficiency_test",
    "creative", "angle", "complex", "scenes", "precision_test",
    "tool_switching", "spatial", "symmetry", "texture", "grid",
)

# Per-difficulty totals of the 250-task reference set
REFERENCE_DIFFICULTY_TOTALS = {"easy": 112, "medium": 97, "hard": 21, "very_hard": 20}

# Reference category breakdown: category -> (easy, medium, hard, very_hard).
# These cells only account for 202 tasks (89/71/26/16) and do not agree with
# the difficulty totals above; both are kept verbatim.
REFERENCE_COMPOSITION = {
    "spatial_reasoning": (35, 24, 8, 4),
    "basic_shapes": (20, 15, 5, 2),
    "objects": (12, 10, 4, 2),
    "compositional": (4, 4, 2, 1),
    "patterns": (3, 3, 2, 1),
    "multi_color": (4, 2, 1, 1),
    "position": (3, 2, 1, 1),
    "size": (2, 2, 1, 1),
    "tool_usage": (2, 2, 1, 0),
    "efficiency_test": (1, 1, 0, 0),
    "creative": (1, 1, 0, 0),
    "angle": (1, 1, 0, 0),
    "complex": (1, 1, 0, 0),
    "scenes": (0, 0, 0, 1),
    "precision_test": (0, 1, 0, 0),
    "tool_switching": (0, 1, 0, 0),
    "spatial": (0, 1, 0, 0),
    "symmetry": (0, 0, 0, 1),
    "texture": (0, 0, 1, 0),
    "grid": (0, 0, 0, 1),
}


class DatasetValidationError(ValueError):
    def __init__(self, reason: str, task_id: Optional[str], message: str):
        self.reason = reason
        self.task_id = task_id
        super().__init__(f"{reason} (task {task_id!r}): {message}")


@dataclass(frozen=True)
class TaskSpec:
    id: str
    text: str
    category: str
    difficulty: str
    criteria: CriteriaSpec
    lenient_criteria: Optional[CriteriaSpec] = None
    rationale: str = ""

    def criteria_for(self, lenient: bool = False) -> CriteriaSpec:
        if lenient and self.lenient_criteria is not None:
            return self.lenient_criteria
        return self.criteria

    def to_dict(self) -> dict:
        d = {"id": self.id, "text": self.text, "category": self.category,
             "difficulty": self.difficulty, "criteria": self.criteria.to_dict()}
        if self.lenient_criteria is not None:
            d["lenient_criteria"] = self.lenient_criteria.to_dict()
        if self.rationale:
            d["rationale"] = self.rationale
        return d


@dataclass(frozen=True)
class Dataset:
    tasks: tuple[TaskSpec, ...]
    name: str = ""
    version: str = ""

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    def get(self, task_id: str) -> TaskSpec:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(task_id)


def _criteria(raw, task_id) -> CriteriaSpec:
    if not isinstance(raw, dict) or not raw:
        raise DatasetValidationError("empty-criteria", task_id, "criteria must be a non-empty object")
    try:
        spec = CriteriaSpec.from_dict(raw)
        spec.validate()
    except DatasetValidationError:
        raise
    except (ValueError, TypeError) as exc:
        msg = str(exc)
        reason = "empty-criteria" if msg.startswith("empty-criteria") else "bad-threshold"
        raise DatasetValidationError(reason, task_id, msg) from None
    return spec


def parse_task(raw: dict) -> TaskSpec:
    task_id = raw.get("id") if isinstance(raw, dict) else None
    if not isinstance(raw, dict) or not isinstance(task_id, str) or not task_id:
        raise DatasetValidationError("bad-threshold", task_id, "task needs a non-empty string id")
    if raw.get("category") not in CATEGORIES:
        raise DatasetValidationError("unknown-category", task_id, f"category {raw.get('category')!r}")
    if raw.get("difficulty") not in DIFFICULTIES:
        raise DatasetValidationError("unknown-difficulty", task_id, f"difficulty {raw.get('difficulty')!r}")
    lenient = raw.get("lenient_criteria")
    return TaskSpec(
        id=task_id,
        text=str(raw.get("text", "")),
        category=raw["category"],
        difficulty=raw["difficulty"],
        criteria=_criteria(raw.get("criteria"), task_id),
        lenient_criteria=None if lenient is None else _criteria(lenient, task_id),
        rationale=str(raw.get("rationale", "")),
    )


def dataset_from_dict(doc: dict) -> Dataset:
    if not isinstance(doc, dict) or not isinstance(doc.get("tasks"), list):
        raise DatasetValidationError("bad-threshold", None, "document needs a top-level 'tasks' array")
    if doc.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise DatasetValidationError("bad-threshold", None, f"unsupported schema_version {doc['schema_version']}")
    tasks, seen = [], set()
    for raw in doc["tasks"]:
        task = parse_task(raw)
        if task.id in seen:
            raise DatasetValidationError("duplicate-id", task.id, "task id appears more than once")
        seen.add(task.id)
        tasks.append(task)
    if not tasks:
        raise DatasetValidationError("empty-criteria", None, "dataset has no tasks")
    return Dataset(tuple(tasks), str(doc.get("name", "")), str(doc.get("version", "")))


def load_dataset(path: Union[str, Path]) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetValidationError("bad-threshold", None, f"not valid JSON: {exc}") from None
    return dataset_from_dict(doc)


def seed_path() -> Path:
    return Path(str(resources.files("drawbench") / "data" / "seed.tasks.json"))


def load_seed() -> Dataset:
    return load_dataset(seed_path())


def dump_dataset(ds: Dataset) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "name": ds.name, "version": ds.version,
           "tasks": [t.to_dict() for t in ds.tasks]}
    return json.dumps(doc, indent=2) + "\n"


@dataclass
class DatasetStats:
    total: int
    by_difficulty: dict[str, tuple[int, float]] = field(default_factory=dict)
    by_category: dict[str, tuple[int, float]] = field(default_factory=dict)

    def table(self) -> str:
        lines = [f"{'Difficulty':<14}{'Count':>7}{'%':>8}"]
        for k, (n, p) in self.by_difficulty.items():
            lines.append(f"{k:<14}{n:>7}{p:>7.1f}%")
        lines.append(f"{'Total':<14}{self.total:>7}{100.0 if self.total else 0.0:>7.1f}%")
        lines += ["", f"{'Category':<20}{'Count':>7}{'%':>8}"]
        for k, (n, p) in self.by_category.items():
            if n:
                lines.append(f"{k:<20}{n:>7}{p:>7.1f}%")
        return "\n".join(lines) + "\n"


def _pct(n: int, total: int) -> float:
    return round(100.0 * n / total, 1) if total else 0.0


def dataset_stats(tasks: Iterable[TaskSpec]) -> DatasetStats:
    tasks = list(tasks)
    total = len(tasks)
    by_d = Counter(t.difficulty for t in tasks)
    by_c = Counter(t.category for t in tasks)
    return DatasetStats(
        total=total,
        by_difficulty={d: (by_d[d], _pct(by_d[d], total)) for d in DIFFICULTIES},
        by_category={c: (by_c[c], _pct(by_c[c], total)) for c in CATEGORIES},
    )


def reference_composition_tasks() -> list[TaskSpec]:
    """Placeholder tasks reproducing the 250-task reference difficulty split.

    Categories follow the category breakdown cell by cell until a difficulty's
    total is reached; tasks the breakdown does not account for get an empty
    category (and so never appear in per-category counts).
    """
    stub = CriteriaSpec(min_segments=1)
    out = []
    for j, diff in enumerate(DIFFICULTIES):
        cats = [cat for cat, counts in REFERENCE_COMPOSITION.items() for _ in range(counts[j])]
        total = REFERENCE_DIFFICULTY_TOTALS[diff]
        cats = (cats + [""] * total)[:total]
        out += [TaskSpec(f"{diff}-{i}", "", cat, diff, stub) for i, cat in enumerate(cats)]
    return out
