import math

import pytest

from drawbench.harness import aggregate, format_csv, format_tables, improvement_bucket
from drawbench.harness.aggregate import BUCKETS, ErrorRow, _pct


def _turn(n, score, errors=(), actions=8):
    return {"turn": n, "score": score, "tokens": {"input": 100, "output": 20},
            "report": {"errors": [{"kind": k} for k in errors], "stats": {"action_count": actions}}}


def _session(i, t1, t2=None, e1=(), e2=(), difficulty="easy", category="basic_shapes", model="m"):
    turns = [_turn(1, t1, e1)]
    if t2 is not None:
        turns.append(_turn(2, t2, e2))
    return {"task_id": f"t{i}", "model_id": model, "difficulty": difficulty, "category": category,
            "failure": None, "turns": turns}


def synthetic_corpus():
    """100 sessions with hand-computed statistics (see the test below)."""
    out = []
    i = 0
    for _ in range(50):
        out.append(_session(i, 1.0)); i += 1
    for _ in range(20):
        out.append(_session(i, 0.9, difficulty="medium")); i += 1
    # 30 sessions that take a second turn, carrying all the errors
    e1 = [["SYNTAX_ERROR"]] * 4 + [["COORDINATE_ERROR"]] * 8 + [["LOGIC_ERROR"]] * 18
    e1[0] = ["SYNTAX_ERROR", "LOGIC_ERROR"]
    e1[1] = ["SYNTAX_ERROR", "LOGIC_ERROR"]
    e2 = [["COORDINATE_ERROR"]] * 2 + [["LOGIC_ERROR"]] * 10 + [[]] * 18
    pairs = [(0.8, 0.83)] * 10 + [(0.7, 0.78)] * 10 + [(0.5, 0.95)] * 10
    for k, (a, b) in enumerate(pairs):
        out.append(_session(i, a, b, e1[k], e2[k], difficulty="hard" if k < 20 else "very_hard",
                            category="scenes" if k >= 20 else "objects", model="n" if k % 2 else "m"))
        i += 1
    out.append({"task_id": "dead", "model_id": "m", "difficulty": "easy", "category": "objects",
                "failure": "client unreachable", "turns": []})
    return out


def test_overall_statistics():
    agg = aggregate(synthetic_corpus())
    assert agg.sessions == 100 and agg.failed == 1
    t1, t2 = agg.turn1, agg.turn2
    assert t1.mean == pytest.approx(0.88, abs=1e-12)
    assert t1.std == pytest.approx(0.16, abs=1e-12)
    assert t1.median == pytest.approx(0.95, abs=1e-12)
    assert (t1.perfect, t1.perfect_rate) == (70, 70.0)
    assert t2.mean == pytest.approx(0.936, abs=1e-12)
    assert t2.std == pytest.approx(math.sqrt(0.005884), abs=1e-12)
    assert t2.median == pytest.approx(0.975, abs=1e-12)
    assert (t2.perfect, t2.perfect_rate) == (80, 80.0)


def test_improvement_distribution():
    agg = aggregate(synthetic_corpus())
    assert list(agg.buckets.values()) == [70, 10, 10, 10]


def test_error_table():
    agg = aggregate(synthetic_corpus())
    rows = {k: (r.turn1, r.turn2, r.reduction) for k, r in agg.errors.items()}
    assert rows == {"SYNTAX_ERROR": (4, 0, -100.0), "COORDINATE_ERROR": (8, 2, -75.0),
                    "LOGIC_ERROR": (20, 10, -50.0), "EFFICIENCY_WARNING": (0, 0, None)}
    tot = agg.error_total
    assert (tot.turn1, tot.turn2, tot.reduction) == (32, 12, -62.5)


def test_groups():
    agg = aggregate(synthetic_corpus())
    assert list(agg.by_difficulty) == ["easy", "medium", "hard", "very_hard"]
    hard = agg.by_difficulty["hard"]
    assert hard.tests == 20
    assert hard.t1_mean == pytest.approx(0.75) and hard.t2_mean == pytest.approx(0.805)
    vh = agg.by_difficulty["very_hard"]
    assert vh.improvement == pytest.approx(0.45) and (vh.perfect_t1, vh.perfect_t2) == (0, 10)
    assert agg.by_category["scenes"].tests == 10
    assert set(agg.by_model) == {"m", "n"} and sum(g.tests for g in agg.by_model.values()) == 100


@pytest.mark.parametrize("delta,bucket", [
    (-0.2, 0), (0.0, 0), (0.004, 0), (0.005, 1), (0.05, 1), (0.054, 1), (0.055, 2),
    (0.1, 2), (0.104, 2), (0.105, 3), (0.45, 3),
])
def test_bucket_boundaries(delta, bucket):
    assert improvement_bucket(delta) == BUCKETS[bucket]


def test_reference_error_table_percentages():
    rows = [ErrorRow(3, 0), ErrorRow(8, 2), ErrorRow(15, 5), ErrorRow(42, 28), ErrorRow(68, 35)]
    assert [_pct(r.reduction) for r in rows] == ["-100%", "-75%", "-67%", "-33%", "-49%"]
    assert _pct(-62.5) == "-63%" and _pct(None) == "n/a"


def test_tables_render():
    text = format_tables(aggregate(synthetic_corpus()))
    for title in ("Overall Performance", "Performance by Difficulty", "Performance by Category",
                  "Performance by Model", "Multi-turn Improvement Distribution", "Error Frequency and Reduction"):
        assert title in text
    assert "Perfect Rate     70.0%   80.0%  +10.0%" in text.splitlines()
    assert "very_hard      10     0.500     0.950   +0.450" in text.splitlines()
    assert "Sessions: 100 scored, 1 failed." in text
    csv_text = format_csv(aggregate(synthetic_corpus()))
    assert "Error Frequency and Reduction,Total,Reduction,-63%" in csv_text
    assert csv_text.startswith("table,row,column,value\n")


def test_empty_and_all_failed():
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        aggregate([{"failure": "x", "turns": []}])
