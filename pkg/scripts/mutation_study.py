#!/usr/bin/env python3
"""Show how scores and detected errors react to common mistakes.

Each worked fixture is mutated the way a model typically goes wrong (a
forgotten mouseUp, a coordinate far off-screen, a truncated answer, lots of
idle moves) and re-scored against its own task.
"""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from drawbench import evaluate, load_dataset  # noqa: E402
from test_acceptance import MUTATIONS  # noqa: E402


def main():
    tasks = load_dataset(ROOT / "tests" / "fixtures" / "worked.tasks.json")
    fixtures = {p.name.split("_")[0]: p for p in (ROOT / "tests" / "fixtures").glob("d?_*.actions.json")}
    print(f"{'task':<6}{'mutation':<26}{'ratio':>7}{'weighted':>10}  errors")
    for task in tasks:
        text = fixtures[task.id].read_text()
        base = evaluate(text, task.criteria)
        print(f"{task.id:<6}{'(none)':<26}{base.score_ratio:>7.2f}{base.score_weighted:>10.2f}  -")
        for label, mutate, _, _ in MUTATIONS:
            rep = evaluate(mutate(text), task.criteria)
            errs = ", ".join(e.kind for e in rep.errors) or "-"
            print(f"{'':<6}{label:<26}{rep.score_ratio:>7.2f}{rep.score_weighted:>10.2f}  {errs}")


if __name__ == "__main__":
    main()
