
import pytest

from drawbench.dataset import (
    CATEGORIES,
    DIFFICULTIES,
    DatasetValidationError,
    dataset_from_dict,
    dataset_stats,
    dump_dataset,
    load_dataset,
    load_seed,
    reference_composition_tasks,
    REFERENCE_COMPOSITION,
    REFERENCE_DIFFICULTY_TOTALS,
)
from drawbench.evaluator import CriteriaSpec


def _task(tid="t1", **kw):
    d = {"id": tid, "text": "draw", "category": "basic_shapes", "difficulty": "easy",
         "criteria": {"min_segments": 1}}
    d.update(kw)
    return d


def test_seed_set_shape():
    ds = load_seed()
    assert len(ds) == 20
    stats = dataset_stats(ds)
    assert {d: n for d, (n, _) in stats.by_difficulty.items()} == {d: 5 for d in DIFFICULTIES}
    assert all(p == 25.0 for _, p in stats.by_difficulty.values())
    for t in ds:
        t.criteria.validate()
        assert t.text and t.rationale


def test_seed_round_trip(tmp_path):
    ds = load_seed()
    path = tmp_path / "copy.tasks.json"
    path.write_text(dump_dataset(ds))
    again = load_dataset(path)
    assert again == ds


def test_reference_composition():
    stats = dataset_stats(reference_composition_tasks())
    assert stats.total == 250
    assert stats.by_difficulty == {"easy": (112, 44.8), "medium": (97, 38.8),
                                   "hard": (21, 8.4), "very_hard": (20, 8.0)}
    assert stats.by_category["spatial_reasoning"] == (71, 28.4)
    assert stats.by_category["basic_shapes"] == (42, 16.8)


def test_reference_breakdown_cells():
    # the category cells, taken on their own
    assert sum(sum(c) for c in REFERENCE_COMPOSITION.values()) == 202
    assert sum(REFERENCE_DIFFICULTY_TOTALS.values()) == 250
    assert len(REFERENCE_COMPOSITION) == len(CATEGORIES)


@pytest.mark.parametrize("tasks,reason", [
    ([_task(), _task()], "duplicate-id"),
    ([_task(category="doodles")], "unknown-category"),
    ([_task(difficulty="extreme")], "unknown-difficulty"),
    ([_task(criteria={"min_coverage": 1.5})], "bad-threshold"),
    ([_task(criteria={"min_segments": -1})], "bad-threshold"),
    ([_task(criteria={})], "empty-criteria"),
    ([_task(criteria={"position_constraint": None})], "empty-criteria"),
])
def test_validation_reasons(tasks, reason):
    with pytest.raises(DatasetValidationError) as exc:
        dataset_from_dict({"tasks": tasks})
    assert exc.value.reason == reason


def test_lenient_variant():
    ds = dataset_from_dict({"tasks": [_task(criteria={"required_tools": ["circle"], "min_segments": 1},
                                            lenient_criteria={"min_segments": 1})]})
    t = ds.tasks[0]
    assert t.criteria_for(False).required_tools is not None
    assert t.criteria_for(True) == CriteriaSpec(min_segments=1)


def test_load_rejects_non_json(tmp_path):
    p = tmp_path / "bad.tasks.json"
    p.write_text("{nope")
    with pytest.raises(DatasetValidationError):
        load_dataset(p)


def test_categories_cover_composition():
    assert len(CATEGORIES) == 20


def test_seed_shape_tasks_have_lenient_variant():
    shapes = {"line", "rectangle", "circle"}
    for t in load_seed():
        tools = {x.value for x in t.criteria.required_tools or ()}
        if tools & shapes:
            assert t.lenient_criteria is not None, t.id
            assert not ({x.value for x in t.lenient_criteria.required_tools or ()} & shapes), t.id
