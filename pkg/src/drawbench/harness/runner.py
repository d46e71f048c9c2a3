"""Two-turn evaluation sessions and the batch runner."""
from __future__ import annotations

import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from ..actions import SyntaxFailure, parse_actions, serialize_actions
from ..dataset import Dataset, TaskSpec
from ..evaluator import SCORE_MODES, EvaluationReport, evaluate
from ..feedback import FeedbackDocument, feedback_record, generate_feedback
from ..geometry import DEFAULT_LAYOUT, UILayout
from .clients import Generation, GenerationParams, ModelClient, TransportError, estimate_tokens
from .prompt import PROMPT_VERSION, build_prompt

log = logging.getLogger(__name__)

RESULTS_SCHEMA_VERSION = 1

Clock = Callable[[], float]


@dataclass(frozen=True)
class RunConfig:
    temperature: float = 0.7
    max_tokens: int = 4000
    timeout_seconds: float = 30.0
    retries: int = 3              # total attempts per generate call
    early_stop_threshold: float = 0.9
    score_mode: str = "ratio"
    lenient: bool = False         # use each task's lenient criteria when present
    strict_tools: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.score_mode not in SCORE_MODES:
            raise ValueError(f"score_mode must be one of {SCORE_MODES}")
        if not 0 < self.early_stop_threshold <= 1:
            raise ValueError("early_stop_threshold must be in (0, 1]")
        for name in ("temperature", "max_tokens", "timeout_seconds", "retries", "jobs"):
            if getattr(self, name) <= 0 and name != "temperature":
                raise ValueError(f"{name} must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")

    @property
    def params(self) -> GenerationParams:
        return GenerationParams(self.temperature, self.max_tokens, self.timeout_seconds)


@dataclass
class TurnResult:
    turn: int
    raw_output: str
    report: EvaluationReport
    feedback: Optional[FeedbackDocument]
    input_tokens: int
    output_tokens: int
    tokens_estimated: bool
    attempts: int
    elapsed_ms: float

    @property
    def score(self) -> float:
        return self.report.score


@dataclass
class SessionResult:
    task_id: str
    model_id: str
    difficulty: str = ""
    category: str = ""
    turn1: Optional[TurnResult] = None
    turn2: Optional[TurnResult] = None
    failure: Optional[str] = None

    @property
    def final_score(self) -> Optional[float]:
        last = self.turn2 or self.turn1
        return None if last is None else last.score

    @property
    def improvement(self) -> float:
        if self.turn1 is None or self.turn2 is None:
            return 0.0
        return self.turn2.score - self.turn1.score


class SessionFailure(RuntimeError):
    pass


def _call_with_deadline(client: ModelClient, prompt: str, params: GenerationParams,
                        lock: Optional[threading.Lock]) -> Generation:
    box: dict = {}

    def target():
        try:
            if lock is not None:
                with lock:
                    box["value"] = client.generate(prompt, params)
            else:
                box["value"] = client.generate(prompt, params)
        except BaseException as exc:  # surfaced to the caller below
            box["error"] = exc

    t = threading.Thread(target=target, daemon=True)
    t.start()
    t.join(params.timeout)
    if t.is_alive():
        raise TransportError(f"no response within {params.timeout:g}s")
    if "error" in box:
        err = box["error"]
        if isinstance(err, TransportError):
            raise err
        raise TransportError(f"{type(err).__name__}: {err}") from err
    value = box.get("value")
    if not isinstance(value, Generation):
        raise TransportError(f"client returned {type(value).__name__}, not Generation")
    return value


@dataclass
class _Attempts:
    text: str = ""
    input_tokens: int = 0
    output_tokens: int = 0
    estimated: bool = False
    count: int = 0
    transport_errors: list = field(default_factory=list)


def _generate(client: ModelClient, prompt: str, config: RunConfig,
              lock: Optional[threading.Lock]) -> _Attempts:
    """Call the client, retrying transport failures and unparseable output."""
    acc = _Attempts()
    got_output = False
    for attempt in range(1, config.retries + 1):
        acc.count = attempt
        try:
            gen = _call_with_deadline(client, prompt, config.params, lock)
        except TransportError as exc:
            log.warning("%s attempt %d: %s", client.model_id, attempt, exc)
            acc.transport_errors.append(str(exc))
            continue
        got_output = True
        text = gen.text if isinstance(gen.text, str) else str(gen.text)
        acc.text = text
        if gen.input_tokens is None or gen.output_tokens is None:
            acc.estimated = True
        acc.input_tokens += gen.input_tokens if gen.input_tokens is not None else estimate_tokens(prompt)
        acc.output_tokens += gen.output_tokens if gen.output_tokens is not None else estimate_tokens(text)
        try:
            parse_actions(text)
            break
        except SyntaxFailure:
            continue
    if not got_output:
        raise SessionFailure(f"client unreachable after {config.retries} attempt(s): "
                             f"{acc.transport_errors[-1] if acc.transport_errors else 'unknown'}")
    return acc


def _turn(client, task, config, layout, turn, clock, lock, feedback=None, previous=None) -> TurnResult:
    start = clock()
    prompt = build_prompt(task, layout, turn, feedback, previous)
    acc = _generate(client, prompt, config, lock)
    spec = task.criteria_for(config.lenient)
    report = evaluate(acc.text, spec, layout, config.score_mode, strict_tools=config.strict_tools)
    fb = None
    if turn == 1 and report.score < config.early_stop_threshold:
        fb = generate_feedback(report, spec, layout)
    elapsed = (clock() - start) * 1000.0
    return TurnResult(turn, acc.text, report, fb, acc.input_tokens, acc.output_tokens,
                      acc.estimated, acc.count, round(elapsed, 3))


def run_session(client: ModelClient, task: TaskSpec, config: RunConfig = RunConfig(),
                layout: UILayout = DEFAULT_LAYOUT, clock: Clock = time.perf_counter,
                _lock: Optional[threading.Lock] = None) -> SessionResult:
    """Turn 1, then Turn 2 with feedback unless Turn 1 already reaches the threshold."""
    result = SessionResult(task.id, client.model_id, task.difficulty, task.category)
    try:
        t1 = _turn(client, task, config, layout, 1, clock, _lock)
        result.turn1 = t1
        if t1.feedback is not None:
            seq = t1.report.sequence
            previous = serialize_actions(seq) if seq is not None else t1.raw_output
            result.turn2 = _turn(client, task, config, layout, 2, clock, _lock, t1.feedback, previous)
    except SessionFailure as exc:
        result.failure = str(exc)
    return result


# -- persistence ---------------------------------------------------------------

def _turn_record(t: TurnResult) -> dict:
    seq = t.report.sequence
    return {
        "turn": t.turn,
        "raw_output": t.raw_output,
        "actions": None if seq is None else [a.to_dict() for a in seq],
        "score": t.report.score,
        "report": t.report.to_dict(),
        "feedback_text": None if t.feedback is None else t.feedback.text,
        "feedback": None if t.feedback is None else feedback_record(t.feedback),
        "tokens": {"input": t.input_tokens, "output": t.output_tokens, "estimated": t.tokens_estimated},
        "attempts": t.attempts,
        "elapsed_ms": t.elapsed_ms,
    }


def session_record(s: SessionResult) -> dict:
    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "prompt_version": PROMPT_VERSION,
        "task_id": s.task_id,
        "model_id": s.model_id,
        "difficulty": s.difficulty,
        "category": s.category,
        "final_score": s.final_score,
        "improvement": s.improvement,
        "failure": s.failure,
        "turns": [_turn_record(t) for t in (s.turn1, s.turn2) if t is not None],
    }


def record_line(s: SessionResult) -> str:
    return json.dumps(session_record(s), sort_keys=True, ensure_ascii=False) + "\n"


# -- batch ---------------------------------------------------------------------

def run_benchmark(clients: Sequence[ModelClient], dataset: Iterable[TaskSpec],
                  config: RunConfig = RunConfig(), layout: UILayout = DEFAULT_LAYOUT,
                  sink: Optional[Callable[[SessionResult], None]] = None,
                  clock: Clock = time.perf_counter) -> list[SessionResult]:
    """Run every (model, task) session, model-major and task-minor.

    ``sink`` receives each result in that order as soon as it and all its
    predecessors are done, so streamed output is identical for any ``jobs``.
    """
    tasks = list(dataset.tasks if isinstance(dataset, Dataset) else dataset)
    units = [(c, t) for c in clients for t in tasks]
    locks = {id(c): threading.Lock() for c in clients if getattr(c, "serial", False)}
    results: list[Optional[SessionResult]] = [None] * len(units)
    emit_lock = threading.Lock()
    next_emit = 0

    def one(i: int) -> None:
        nonlocal next_emit
        client, task = units[i]
        try:
            res = run_session(client, task, config, layout, clock, locks.get(id(client)))
        except Exception as exc:  # never let one session sink the batch
            log.exception("session %s/%s crashed", getattr(client, "model_id", "?"), task.id)
            res = SessionResult(task.id, getattr(client, "model_id", "?"), task.difficulty, task.category,
                                failure=f"{type(exc).__name__}: {exc}")
        with emit_lock:
            results[i] = res
            while next_emit < len(units) and results[next_emit] is not None:
                if sink is not None:
                    sink(results[next_emit])
                next_emit += 1

    if config.jobs <= 1:
        for i in range(len(units)):
            one(i)
    else:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            list(pool.map(one, range(len(units))))
    return list(results)


def write_results(results: Iterable[SessionResult], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in results:
            fh.write(record_line(r))


def read_results(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
