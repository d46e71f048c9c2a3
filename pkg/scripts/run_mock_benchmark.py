#!/usr/bin/env python3
"""Run the two-turn protocol over a dataset with scripted mock models.

Two mock "models" are compared: one that always answers with the same blue
rectangle, and one that first answers badly and then corrects itself once it
sees feedback. Useful as an offline smoke test of the whole pipeline.

    python3 scripts/run_mock_benchmark.py --out runs/mock.results.jsonl
"""
import argparse
from pathlib import Path

from drawbench.dataset import load_dataset, seed_path
from drawbench.harness import RunConfig, ScriptedMockClient, aggregate, format_tables, run_benchmark, write_results
from drawbench.harness.clients import DEFAULT_MOCK_OUTPUT


def learner_script(dataset) -> dict:
    # first turn: a rectangle in the wrong color at the edge; second: the default answer
    first = DEFAULT_MOCK_OUTPUT.replace('"x": 477, "y": 25', '"x": 429, "y": 25') \
                               .replace('"x": 700, "y": 500', '"x": 420, "y": 320')
    return {t.id: [first, DEFAULT_MOCK_OUTPUT] for t in dataset}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dataset", default=str(seed_path()))
    ap.add_argument("--out", default="mock.results.jsonl")
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--mode", choices=("ratio", "weighted"), default="ratio")
    args = ap.parse_args()

    ds = load_dataset(args.dataset)
    clients = [
        ScriptedMockClient(model_id="mock:constant"),
        ScriptedMockClient(learner_script(ds), model_id="mock:learner"),
    ]
    results = run_benchmark(clients, ds, RunConfig(jobs=args.jobs, score_mode=args.mode), clock=lambda: 0.0)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_results(results, args.out)
    print(f"wrote {len(results)} sessions to {args.out}\n")
    print(format_tables(aggregate(results)), end="")


if __name__ == "__main__":
    main()
