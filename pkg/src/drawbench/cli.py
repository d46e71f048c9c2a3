"""Command-line interface.

Exit codes: 0 perfect score / success, 1 imperfect score or invalid dataset,
2 operational error (unreadable input, bad flags, bad config).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .actions import SyntaxFailure, parse_actions
from .dataset import DatasetValidationError, dataset_stats, load_dataset
from .evaluator import SCORE_MODES, evaluate
from .feedback import generate_feedback
from .geometry import DEFAULT_LAYOUT, load_layout
from .interpreter import interpret
from .render import render_svg

EXIT_OK, EXIT_IMPERFECT, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _layout(path: Optional[str]):
    if path is None:
        return DEFAULT_LAYOUT
    try:
        return load_layout(path)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"bad layout file {path}: {exc}") from None


def _dataset(path: str):
    try:
        return load_dataset(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    except DatasetValidationError as exc:
        raise CliError(f"invalid dataset {path}: {exc}") from None


def cmd_eval(args) -> int:
    text = _read(args.actions)
    ds = _dataset(args.task)
    if args.task_id:
        try:
            task = ds.get(args.task_id)
        except KeyError:
            raise CliError(f"task {args.task_id!r} not in {args.task}") from None
    elif len(ds) == 1:
        task = ds.tasks[0]
    else:
        raise CliError(f"{args.task} holds {len(ds)} tasks; pick one with --task-id")
    layout = _layout(args.layout)
    spec = task.criteria_for(args.lenient)
    report = evaluate(text, spec, layout, args.mode, strict_tools=args.strict_tools)
    record = {"task_id": task.id, **report.to_dict()}
    print(json.dumps(record, indent=2, sort_keys=True))
    print()
    print(generate_feedback(report, spec, layout).text, end="")
    return EXIT_OK if report.score >= 1 else EXIT_IMPERFECT


def cmd_render(args) -> int:
    text = _read(args.actions)
    try:
        seq = parse_actions(text)
    except SyntaxFailure as exc:
        raise CliError(f"{args.actions}: {exc}") from None
    layout = _layout(args.layout)
    svg = render_svg(interpret(seq, layout), layout.canvas)
    out = args.output
    if out is None:
        name = Path(args.actions).name
        stem = name[:-len(".actions.json")] if name.endswith(".actions.json") else Path(name).stem
        out = str(Path(args.actions).with_name(stem + ".svg"))
    Path(out).write_text(svg, encoding="utf-8")
    print(out)
    return EXIT_OK


def _run_config(args):
    from .harness import RunConfig

    fields = {}
    if args.config:
        try:
            fields = json.loads(_read(args.config))
        except json.JSONDecodeError as exc:
            raise CliError(f"bad config {args.config}: {exc}") from None
        known = {f.name for f in dataclasses.fields(RunConfig)}
        unknown = set(fields) - known
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
    for key in ("jobs", "score_mode", "lenient"):
        value = getattr(args, key)
        if value is not None:
            fields[key] = value
    try:
        return RunConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad run config: {exc}") from None


def cmd_bench(args) -> int:
    from .harness import ScriptedMockClient, aggregate, format_tables, make_client, record_line, run_benchmark

    ds = _dataset(args.dataset)
    config = _run_config(args)
    layout = _layout(args.layout)
    script = None
    if args.mock_script:
        try:
            script = json.loads(_read(args.mock_script))
        except json.JSONDecodeError as exc:
            raise CliError(f"bad mock script: {exc}") from None
    try:
        clients = [make_client(c, args.base_url, script) for c in (args.client or ["mock"])]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    # mock-only runs are fully reproducible, so timings are pinned to zero
    deterministic = all(isinstance(c, ScriptedMockClient) for c in clients)
    clock_kw = {"clock": (lambda: 0.0)} if deterministic else {}

    out = Path(args.out)
    try:
        fh = open(out, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}") from None
    with fh:
        def sink(res):
            fh.write(record_line(res))
            fh.flush()
        results = run_benchmark(clients, ds, config, layout, sink=sink, **clock_kw)
    failed = [r for r in results if r.failure]
    print(f"wrote {len(results)} result(s) to {out}")
    for r in failed:
        print(f"FAILED {r.model_id}/{r.task_id}: {r.failure}")
    if len(failed) < len(results):
        print()
        print(format_tables(aggregate(results)), end="")
    return EXIT_OK


def cmd_report(args) -> int:
    from .harness import aggregate, format_csv, format_tables, read_results

    try:
        records = read_results(args.results)
    except OSError as exc:
        raise CliError(f"cannot read {args.results}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.results} is not a results file: {exc}") from None
    try:
        agg = aggregate(records)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"cannot aggregate {args.results}: {exc}") from None
    print(format_tables(agg) if args.format == "table" else format_csv(agg), end="")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        ds = load_dataset(args.dataset)
    except OSError as exc:
        raise CliError(f"cannot read {args.dataset}: {exc}") from None
    except DatasetValidationError as exc:
        print(f"INVALID: {exc}")
        return EXIT_IMPERFECT
    print(f"OK: {ds.name or args.dataset} ({len(ds)} tasks)")
    print(dataset_stats(ds).table(), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drawbench", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log retries and failures to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="score one action file against a task")
    e.add_argument("actions", help="model output or .actions.json file")
    e.add_argument("task", help=".tasks.json file")
    e.add_argument("--task-id", help="task to use when the file holds several")
    e.add_argument("--mode", choices=SCORE_MODES, default="ratio", help="score reported as 'score' (default ratio)")
    e.add_argument("--layout", help="layout description file (default: built-in UI)")
    e.add_argument("--lenient", action="store_true", help="use the task's lenient criteria when present")
    e.add_argument("--strict-tools", action="store_true", help="count a tool only if it also drew something")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("render", help="render an action file to SVG")
    r.add_argument("actions", help=".actions.json file")
    r.add_argument("-o", "--output", help="output path (default: <name>.svg next to the input)")
    r.add_argument("--layout", help="layout description file")
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("bench", help="run the two-turn protocol over a dataset")
    b.add_argument("dataset", help=".tasks.json file")
    b.add_argument("--client", action="append",
                   help="'mock' or provider:model (openai, anthropic, google); repeatable, default mock")
    b.add_argument("--config", help="JSON file of run settings (temperature, max_tokens, timeout_seconds, ...)")
    b.add_argument("--out", default="bench.results.jsonl", help="results file (default bench.results.jsonl)")
    b.add_argument("--jobs", type=int, help="concurrent sessions (default 1)")
    b.add_argument("--mode", dest="score_mode", choices=SCORE_MODES, help="score mode for early stopping")
    b.add_argument("--lenient", action="store_true", default=None, help="use lenient criteria")
    b.add_argument("--mock-script", help="JSON map task-id -> output or list of outputs for the mock client")
    b.add_argument("--base-url", help="override the provider API base URL")
    b.add_argument("--layout", help="layout description file")
    b.set_defaults(func=cmd_bench)

    rp = sub.add_parser("report", help="summarize a results file")
    rp.add_argument("results", help=".results.jsonl file")
    rp.add_argument("--format", choices=("table", "csv"), default="table")
    rp.set_defaults(func=cmd_report)

    v = sub.add_parser("validate-dataset", help="check a dataset file and print its distribution")
    v.add_argument("dataset", help=".tasks.json file")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"drawbench: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
