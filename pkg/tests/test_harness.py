import json
import threading
import time

import httpx
import pytest

from drawbench.dataset import TaskSpec
from drawbench.evaluator import CriteriaSpec
from drawbench.feedback import generate_feedback
from drawbench.harness import (
    AnthropicClient,
    Generation,
    GoogleClient,
    OpenAIClient,
    RunConfig,
    ScriptedMockClient,
    TransportError,
    build_prompt,
    make_client,
    record_line,
    run_benchmark,
    run_session,
)
from drawbench.harness.clients import DEFAULT_MOCK_OUTPUT, GenerationParams
from conftest import worked_text

D2 = DEFAULT_MOCK_OUTPUT
CIRCLE = D2.replace('"x": 35, "y": 365', '"x": 35, "y": 445')

CIRCLE_TASK = TaskSpec(
    "blue-circle", "Draw a blue circle in the center", "basic_shapes", "easy",
    CriteriaSpec(required_tools={"circle"}, required_colors={"blue"}, min_segments=1, position_constraint="center"),
)
RECT_TASK = TaskSpec(
    "blue-rect", "Draw a blue rectangle", "basic_shapes", "easy",
    CriteriaSpec(required_tools={"rectangle"}, required_colors={"blue"}, min_segments=1),
)


def zero_clock():
    return 0.0


class Recording:
    """Wraps a client and remembers every prompt it was sent."""

    def __init__(self, inner):
        self.inner = inner
        self.model_id = inner.model_id
        self.prompts = []

    def generate(self, prompt, params):
        self.prompts.append(prompt)
        return self.inner.generate(prompt, params)


# -- prompts -------------------------------------------------------------------

def test_prompt_turn1_contents():
    p = build_prompt(CIRCLE_TASK)
    assert "(35, 365)" in p and "(35, 445)" in p and "(477, 25)" in p
    assert "Task ID: blue-circle" in p
    assert "Draw a blue circle in the center" in p
    assert "FEEDBACK" not in p
    assert build_prompt(CIRCLE_TASK) == p


def test_prompt_turn2_embeds_feedback_verbatim():
    from drawbench.evaluator import evaluate

    report = evaluate(D2, CIRCLE_TASK.criteria)
    fb = generate_feedback(report, CIRCLE_TASK.criteria)
    p = build_prompt(CIRCLE_TASK, turn=2, feedback=fb, previous=D2)
    assert fb.text.rstrip("\n") in p
    assert "Required tool 'circle' was not used.\n     Select it by clicking at coordinates (35, 445)." in p
    assert "YOUR PREVIOUS ATTEMPT" in p and D2 in p
    with pytest.raises(ValueError):
        build_prompt(CIRCLE_TASK, turn=2)
    with pytest.raises(ValueError):
        build_prompt(CIRCLE_TASK, turn=1, feedback=fb)


# -- sessions ------------------------------------------------------------------

def test_early_stop_on_good_first_turn():
    client = Recording(ScriptedMockClient({"blue-rect": D2}))
    res = run_session(client, RECT_TASK, clock=zero_clock)
    assert res.turn1.score == 1.0
    assert res.turn2 is None and res.turn1.feedback is None
    assert len(client.prompts) == 1
    assert res.improvement == 0.0 and res.final_score == 1.0


def test_feedback_turn_improves():
    client = Recording(ScriptedMockClient({"blue-circle": [D2, CIRCLE]}))
    res = run_session(client, CIRCLE_TASK, clock=zero_clock)
    assert res.turn1.score == 0.75
    assert res.turn2.score == 1.0
    assert res.improvement == pytest.approx(0.25)
    assert len(client.prompts) == 2
    assert res.turn1.feedback.text.rstrip("\n") in client.prompts[1]


def test_unparseable_output_retried_then_scored_as_syntax_error():
    client = Recording(ScriptedMockClient({"blue-rect": "I cannot draw that."}))
    res = run_session(client, RECT_TASK, clock=zero_clock)
    assert res.failure is None
    assert res.turn1.attempts == 3 and res.turn2.attempts == 3
    assert len(client.prompts) == 6
    assert [e.kind for e in res.turn1.report.errors] == ["SYNTAX_ERROR"]
    assert res.turn1.score == 0.0


def test_parse_retry_recovers():
    client = ScriptedMockClient({"blue-rect": ["garbage", D2]})
    res = run_session(client, RECT_TASK, clock=zero_clock)
    assert res.turn1.attempts == 2 and res.turn1.score == 1.0


def test_transport_failure_recorded():
    res = run_session(ScriptedMockClient({"blue-rect": None}), RECT_TASK, clock=zero_clock)
    assert res.turn1 is None and "unreachable after 3" in res.failure
    assert json.loads(record_line(res))["failure"] == res.failure


def test_transport_failure_then_success():
    res = run_session(ScriptedMockClient({"blue-rect": [None, None, D2]}), RECT_TASK, clock=zero_clock)
    assert res.failure is None and res.turn1.attempts == 3 and res.turn1.score == 1.0


class Hanging:
    model_id = "hang"

    def __init__(self):
        self.release = threading.Event()

    def generate(self, prompt, params):
        self.release.wait(5)
        return Generation(D2)


def test_deadline_enforced():
    client = Hanging()
    start = time.monotonic()
    res = run_session(client, RECT_TASK, RunConfig(timeout_seconds=0.05, retries=2), clock=zero_clock)
    client.release.set()
    assert time.monotonic() - start < 2
    assert "no response within" in res.failure


def test_token_estimates_when_unreported():
    res = run_session(ScriptedMockClient({"blue-rect": D2}), RECT_TASK, clock=zero_clock)
    t = res.turn1
    assert t.tokens_estimated
    assert t.output_tokens == -(-len(D2) // 4)
    assert t.input_tokens == -(-len(build_prompt(RECT_TASK)) // 4)


def test_clock_measures_turns():
    ticks = iter(range(0, 100, 1))
    res = run_session(ScriptedMockClient({"blue-rect": D2}), RECT_TASK, clock=lambda: float(next(ticks)))
    assert res.turn1.elapsed_ms == 1000.0


# -- batches -------------------------------------------------------------------

def test_benchmark_order_and_sink():
    m1, m2 = ScriptedMockClient(model_id="m1"), ScriptedMockClient(model_id="m2")
    seen = []
    results = run_benchmark([m1, m2], [RECT_TASK, CIRCLE_TASK], sink=seen.append, clock=zero_clock)
    order = [(r.model_id, r.task_id) for r in results]
    assert order == [("m1", "blue-rect"), ("m1", "blue-circle"), ("m2", "blue-rect"), ("m2", "blue-circle")]
    assert seen == results


def test_parallel_matches_serial():
    tasks = [TaskSpec(f"t{i}", "x", "basic_shapes", "easy", CIRCLE_TASK.criteria) for i in range(12)]
    script = {f"t{i}": [D2, CIRCLE] if i % 2 else D2 for i in range(12)}

    def lines(jobs):
        out = []
        run_benchmark([ScriptedMockClient(script, model_id="a"), ScriptedMockClient(script, model_id="b")],
                      tasks, RunConfig(jobs=jobs), sink=lambda r: out.append(record_line(r)), clock=zero_clock)
        return out

    assert lines(1) == lines(4)


def test_record_shape():
    res = run_session(ScriptedMockClient({"blue-circle": [D2, CIRCLE]}), CIRCLE_TASK, clock=zero_clock)
    rec = json.loads(record_line(res))
    assert rec["schema_version"] == 1 and rec["prompt_version"] == "v1"
    assert [t["turn"] for t in rec["turns"]] == [1, 2]
    t1 = rec["turns"][0]
    assert t1["actions"][0] == {"action": "moveTo", "x": 35, "y": 365}
    assert t1["feedback"]["errors"][0].startswith("Required tool 'circle'")
    assert rec["turns"][1]["feedback"] is None
    assert rec["improvement"] == pytest.approx(0.25)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(score_mode="median")
    with pytest.raises(ValueError):
        RunConfig(retries=0)
    with pytest.raises(ValueError):
        RunConfig(early_stop_threshold=0)


# -- HTTP adapters -------------------------------------------------------------

def _transport(body, status=200, seen=None):
    def handler(request):
        if seen is not None:
            seen.append(request)
        return httpx.Response(status, json=body)
    return httpx.MockTransport(handler)


PARAMS = GenerationParams(0.2, 100, 5)


def test_openai_client():
    seen = []
    c = OpenAIClient("gpt-x", api_key="k", transport=_transport(
        {"choices": [{"message": {"content": D2}}], "usage": {"prompt_tokens": 11, "completion_tokens": 7}}, seen=seen))
    g = c.generate("hi", PARAMS)
    assert g == Generation(D2, 11, 7)
    req = seen[0]
    assert req.url.path.endswith("/chat/completions")
    assert req.headers["authorization"] == "Bearer k"
    assert json.loads(req.content)["temperature"] == 0.2


def test_anthropic_client():
    seen = []
    c = AnthropicClient("claude-x", api_key="k", transport=_transport(
        {"content": [{"type": "text", "text": "ab"}, {"type": "text", "text": "c"}],
         "usage": {"input_tokens": 3, "output_tokens": 2}}, seen=seen))
    assert c.generate("hi", PARAMS) == Generation("abc", 3, 2)
    assert seen[0].headers["x-api-key"] == "k"
    assert json.loads(seen[0].content)["max_tokens"] == 100


def test_google_client_without_usage():
    c = GoogleClient("gem-x", api_key="k", transport=_transport(
        {"candidates": [{"content": {"parts": [{"text": "[]"}]}}]}))
    assert c.generate("hi", PARAMS) == Generation("[]", None, None)


@pytest.mark.parametrize("status,body", [(500, {"error": "boom"}), (200, {"unexpected": True})])
def test_http_failures_become_transport_errors(status, body):
    c = OpenAIClient("gpt-x", api_key="k", transport=_transport(body, status))
    with pytest.raises(TransportError):
        c.generate("hi", PARAMS)


def test_make_client(monkeypatch):
    assert isinstance(make_client("mock"), ScriptedMockClient)
    assert make_client("mock:alt").model_id == "mock:alt"
    with pytest.raises(ValueError):
        make_client("acme:model")
    monkeypatch.delenv("DRAWBENCH_OPENAI_KEY", raising=False)
    with pytest.raises(ValueError, match="DRAWBENCH_OPENAI_KEY"):
        make_client("openai:gpt-x")
    monkeypatch.setenv("DRAWBENCH_OPENAI_KEY", "k")
    c = make_client("openai:gpt-x", base_url="http://localhost:9/v1/")
    assert c.model_id == "openai:gpt-x" and c.base_url == "http://localhost:9/v1"


def test_mock_default_is_reference_rectangle():
    assert DEFAULT_MOCK_OUTPUT == worked_text("d2").strip()
