"""Aggregate statistics over session results and their table renderings."""
from __future__ import annotations

import csv
import io
import statistics
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Optional, Union

from ..dataset import CATEGORIES, DIFFICULTIES
from ..evaluator import ERROR_KINDS
from .runner import SessionResult, session_record

PERFECT_THRESHOLD = 0.9

BUCKETS = ("No improvement (0.00)", "Small (0.01-0.05)", "Medium (0.06-0.10)", "Large (>0.10)")


@dataclass
class TurnSummary:
    n: int
    mean: float
    std: float      # population
    median: float
    perfect: int
    perfect_rate: float


@dataclass
class GroupSummary:
    tests: int
    t1_mean: float
    t2_mean: float
    improvement: float
    perfect_t1: int
    perfect_t2: int


@dataclass
class ErrorRow:
    turn1: int
    turn2: int

    @property
    def reduction(self) -> Optional[float]:
        if self.turn1 == 0:
            return None
        return 100.0 * (self.turn2 - self.turn1) / self.turn1


@dataclass
class AggregateReport:
    sessions: int
    failed: int
    turn1: TurnSummary
    turn2: TurnSummary
    by_difficulty: dict[str, GroupSummary] = field(default_factory=dict)
    by_category: dict[str, GroupSummary] = field(default_factory=dict)
    by_model: dict[str, GroupSummary] = field(default_factory=dict)
    buckets: dict[str, int] = field(default_factory=dict)
    errors: dict[str, ErrorRow] = field(default_factory=dict)
    mean_actions: tuple[float, float] = (0.0, 0.0)
    mean_tokens: tuple[float, float] = (0.0, 0.0)   # input, output per session

    @property
    def error_total(self) -> ErrorRow:
        return ErrorRow(sum(r.turn1 for r in self.errors.values()), sum(r.turn2 for r in self.errors.values()))


def improvement_bucket(delta: float) -> str:
    d = Decimal(repr(delta)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    if d <= 0:
        return BUCKETS[0]
    if d <= Decimal("0.05"):
        return BUCKETS[1]
    if d <= Decimal("0.10"):
        return BUCKETS[2]
    return BUCKETS[3]


def _summary(scores: list[float], threshold: float) -> TurnSummary:
    perfect = sum(s >= threshold for s in scores)
    return TurnSummary(
        n=len(scores),
        mean=statistics.fmean(scores),
        std=statistics.pstdev(scores),
        median=statistics.median(scores),
        perfect=perfect,
        perfect_rate=100.0 * perfect / len(scores),
    )


def _group(rows: list[dict], threshold: float) -> GroupSummary:
    t1 = [r["_t1"] for r in rows]
    t2 = [r["_t2"] for r in rows]
    m1, m2 = statistics.fmean(t1), statistics.fmean(t2)
    return GroupSummary(len(rows), m1, m2, m2 - m1,
                        sum(s >= threshold for s in t1), sum(s >= threshold for s in t2))


def aggregate(results: Iterable[Union[SessionResult, dict]],
              threshold: float = PERFECT_THRESHOLD) -> AggregateReport:
    """Table-style statistics. Turn-2 figures carry early-stopped Turn-1 scores forward."""
    records = [session_record(r) if isinstance(r, SessionResult) else r for r in results]
    if not records:
        raise ValueError("no results to aggregate")
    ok = [r for r in records if r.get("failure") is None and r.get("turns")]
    if not ok:
        raise ValueError("every session failed")
    rows = []
    for r in ok:
        turns = r["turns"]
        rows.append({**r, "_t1": turns[0]["score"], "_t2": turns[-1]["score"],
                     "_has2": len(turns) > 1})

    def grouped(key, order=None):
        keys = order or sorted({row[key] for row in rows})
        out = {}
        for k in keys:
            members = [row for row in rows if row[key] == k]
            if members:
                out[k] = _group(members, threshold)
        return out

    buckets = Counter(improvement_bucket(row["_t2"] - row["_t1"]) for row in rows)
    errs = {k: ErrorRow(0, 0) for k in ERROR_KINDS}
    for row in rows:
        for t in row["turns"]:
            for e in t["report"]["errors"]:
                er = errs[e["kind"]]
                if t["turn"] == 1:
                    er.turn1 += 1
                else:
                    er.turn2 += 1

    acts1 = [row["turns"][0]["report"]["stats"]["action_count"] for row in rows]
    acts2 = [row["turns"][-1]["report"]["stats"]["action_count"] for row in rows]
    tok_in = [sum(t["tokens"]["input"] for t in row["turns"]) for row in rows]
    tok_out = [sum(t["tokens"]["output"] for t in row["turns"]) for row in rows]

    return AggregateReport(
        sessions=len(rows),
        failed=len(records) - len(rows),
        turn1=_summary([row["_t1"] for row in rows], threshold),
        turn2=_summary([row["_t2"] for row in rows], threshold),
        by_difficulty=grouped("difficulty", [d for d in DIFFICULTIES] +
                              sorted({row["difficulty"] for row in rows} - set(DIFFICULTIES))),
        by_category=grouped("category", list(CATEGORIES) +
                            sorted({row["category"] for row in rows} - set(CATEGORIES))),
        by_model=grouped("model_id"),
        buckets={b: buckets.get(b, 0) for b in BUCKETS},
        errors=errs,
        mean_actions=(statistics.fmean(acts1), statistics.fmean(acts2)),
        mean_tokens=(statistics.fmean(tok_in), statistics.fmean(tok_out)),
    )


# -- rendering -----------------------------------------------------------------

def _table(title: str, header: list[str], body: list[list[str]]) -> str:
    widths = [max(len(str(row[i])) for row in [header] + body) for i in range(len(header))]

    def line(row):
        cells = [str(row[0]).ljust(widths[0])] + [str(c).rjust(w) for c, w in zip(row[1:], widths[1:])]
        return "  ".join(cells).rstrip()

    rule = "-" * len(line(header))
    return "\n".join([title, rule, line(header), rule] + [line(r) for r in body] + [rule])


def _signed(x: float, digits: int = 3) -> str:
    return f"{x:+.{digits}f}"


def _pct(x: Optional[float]) -> str:
    if x is None:
        return "n/a"
    d = Decimal(repr(x)).quantize(Decimal("1"), rounding=ROUND_HALF_UP)
    return f"{int(d):+d}%"


def table_rows(agg: AggregateReport) -> dict[str, tuple[list[str], list[list[str]]]]:
    t1, t2 = agg.turn1, agg.turn2
    n = agg.sessions
    overall = [
        ["Average Score", f"{t1.mean:.3f}", f"{t2.mean:.3f}", _signed(t2.mean - t1.mean)],
        ["Std Deviation", f"{t1.std:.3f}", f"{t2.std:.3f}", _signed(t2.std - t1.std)],
        ["Perfect Scores", f"{t1.perfect}/{n}", f"{t2.perfect}/{n}", f"{t2.perfect - t1.perfect:+d}"],
        ["Perfect Rate", f"{t1.perfect_rate:.1f}%", f"{t2.perfect_rate:.1f}%",
         f"{t2.perfect_rate - t1.perfect_rate:+.1f}%"],
        ["Median Score", f"{t1.median:.3f}", f"{t2.median:.3f}", _signed(t2.median - t1.median)],
    ]

    def groups(d):
        return [[k, str(g.tests), f"{g.t1_mean:.3f}", f"{g.t2_mean:.3f}", _signed(g.improvement)]
                for k, g in d.items()]

    buckets = [[b, str(c), f"{100.0 * c / n:.1f}%"] for b, c in agg.buckets.items()]
    errors = [[k, str(r.turn1), str(r.turn2), _pct(r.reduction)] for k, r in agg.errors.items()]
    tot = agg.error_total
    errors.append(["Total", str(tot.turn1), str(tot.turn2), _pct(tot.reduction)])
    return {
        "Overall Performance": (["Metric", "Turn 1", "Turn 2", "Change"], overall),
        "Performance by Difficulty": (["Difficulty", "Tests", "T1 Score", "T2 Score", "Improve"],
                                      groups(agg.by_difficulty)),
        "Performance by Category": (["Category", "Tests", "T1", "T2", "Improve"], groups(agg.by_category)),
        "Performance by Model": (["Model", "Tests", "T1 Score", "T2 Score", "Improve"], groups(agg.by_model)),
        "Multi-turn Improvement Distribution": (["Improvement Range", "Count", "Percentage"], buckets),
        "Error Frequency and Reduction": (["Error Type", "Turn 1", "Turn 2", "Reduction"], errors),
    }


def format_tables(agg: AggregateReport) -> str:
    blocks = [_table(title, header, body) for title, (header, body) in table_rows(agg).items()]
    foot = (f"Sessions: {agg.sessions} scored, {agg.failed} failed. "
            f"Mean actions: {agg.mean_actions[0]:.1f} (T1) / {agg.mean_actions[1]:.1f} (T2). "
            f"Mean tokens: {agg.mean_tokens[0]:.0f} in / {agg.mean_tokens[1]:.0f} out.")
    return "\n\n".join(blocks + [foot]) + "\n"


def format_csv(agg: AggregateReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "row", "column", "value"])
    for title, (header, body) in table_rows(agg).items():
        for row in body:
            for col, val in zip(header[1:], row[1:]):
                w.writerow([title, row[0], col, val])
    return buf.getvalue()
