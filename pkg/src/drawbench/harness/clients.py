"""Model clients: the in-tree scripted mock plus thin HTTP provider adapters.

HTTP clients read their key from ``DRAWBENCH_<PROVIDER>_KEY`` and accept a
``base_url`` override for proxies or local servers.
"""
from __future__ import annotations

import math
import os
import re
import threading
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional, Protocol, Union

import httpx


class TransportError(RuntimeError):
    """The model could not be reached or returned an unusable response."""


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.7
    max_tokens: int = 4000
    timeout: float = 30.0


@dataclass(frozen=True)
class Generation:
    text: str
    input_tokens: Optional[int] = None
    output_tokens: Optional[int] = None


class ModelClient(Protocol):
    model_id: str

    def generate(self, prompt: str, params: GenerationParams) -> Generation: ...


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text) / 4)


TASK_ID_RE = re.compile(r"^Task ID: (\S+)$", re.MULTILINE)

# Reference blue rectangle, used when the mock has no script for a task
DEFAULT_MOCK_OUTPUT = """[
  {"action": "moveTo", "x": 35, "y": 365},
  {"action": "click"},
  {"action": "moveTo", "x": 477, "y": 25},
  {"action": "click"},
  {"action": "moveTo", "x": 400, "y": 300},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 700, "y": 500},
  {"action": "mouseUp"}
]"""


class ScriptedMockClient:
    """Deterministic stand-in answering from a task-id -> output(s) map.

    A list of outputs is consumed one per call for that task; the last entry
    repeats once the list is exhausted. An output of ``None`` simulates a
    transport failure for that call.
    """

    serial = False

    def __init__(self, script: Optional[dict[str, Union[str, list]]] = None,
                 default: Optional[str] = DEFAULT_MOCK_OUTPUT, model_id: str = "mock"):
        self.script = dict(script or {})
        self.default = default
        self.model_id = model_id
        self._calls: dict[str, int] = defaultdict(int)
        self._lock = threading.Lock()

    def generate(self, prompt: str, params: GenerationParams) -> Generation:
        m = TASK_ID_RE.search(prompt)
        task_id = m.group(1) if m else ""
        with self._lock:
            n = self._calls[task_id]
            self._calls[task_id] += 1
        outputs = self.script.get(task_id, self.default)
        if isinstance(outputs, list):
            out = outputs[min(n, len(outputs) - 1)] if outputs else None
        else:
            out = outputs
        if out is None:
            raise TransportError(f"scripted transport failure for {task_id!r}")
        return Generation(out)


class _HttpClient:
    provider = ""
    default_base_url = ""
    serial = False

    def __init__(self, model: str, api_key: Optional[str] = None, base_url: Optional[str] = None,
                 transport: Optional[httpx.BaseTransport] = None):
        self.model = model
        self.model_id = f"{self.provider}:{model}"
        self.api_key = api_key or os.environ.get(f"DRAWBENCH_{self.provider.upper()}_KEY", "")
        self.base_url = (base_url or self.default_base_url).rstrip("/")
        self._transport = transport

    def _post(self, url: str, payload: dict, headers: dict, timeout: float) -> dict:
        try:
            with httpx.Client(timeout=timeout, transport=self._transport) as http:
                resp = http.post(url, json=payload, headers=headers)
                resp.raise_for_status()
                return resp.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise TransportError(f"{self.model_id}: {exc}") from exc


class OpenAIClient(_HttpClient):
    provider = "openai"
    default_base_url = "https://api.openai.com/v1"

    def generate(self, prompt: str, params: GenerationParams) -> Generation:
        data = self._post(
            f"{self.base_url}/chat/completions",
            {"model": self.model, "messages": [{"role": "user", "content": prompt}],
             "temperature": params.temperature, "max_tokens": params.max_tokens},
            {"Authorization": f"Bearer {self.api_key}"},
            params.timeout,
        )
        try:
            text = data["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"unexpected response shape: {exc}") from exc
        usage = data.get("usage") or {}
        return Generation(text, usage.get("prompt_tokens"), usage.get("completion_tokens"))


class AnthropicClient(_HttpClient):
    provider = "anthropic"
    default_base_url = "https://api.anthropic.com/v1"

    def generate(self, prompt: str, params: GenerationParams) -> Generation:
        data = self._post(
            f"{self.base_url}/messages",
            {"model": self.model, "max_tokens": params.max_tokens, "temperature": params.temperature,
             "messages": [{"role": "user", "content": prompt}]},
            {"x-api-key": self.api_key, "anthropic-version": "2023-06-01"},
            params.timeout,
        )
        try:
            text = "".join(b.get("text", "") for b in data["content"] if b.get("type") == "text")
        except (KeyError, TypeError, AttributeError) as exc:
            raise TransportError(f"unexpected response shape: {exc}") from exc
        usage = data.get("usage") or {}
        return Generation(text, usage.get("input_tokens"), usage.get("output_tokens"))


class GoogleClient(_HttpClient):
    provider = "google"
    default_base_url = "https://generativelanguage.googleapis.com/v1beta"

    def generate(self, prompt: str, params: GenerationParams) -> Generation:
        data = self._post(
            f"{self.base_url}/models/{self.model}:generateContent",
            {"contents": [{"role": "user", "parts": [{"text": prompt}]}],
             "generationConfig": {"temperature": params.temperature, "maxOutputTokens": params.max_tokens}},
            {"x-goog-api-key": self.api_key},
            params.timeout,
        )
        try:
            parts = data["candidates"][0]["content"]["parts"]
            text = "".join(p.get("text", "") for p in parts)
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"unexpected response shape: {exc}") from exc
        usage = data.get("usageMetadata") or {}
        return Generation(text, usage.get("promptTokenCount"), usage.get("candidatesTokenCount"))


PROVIDERS = {"openai": OpenAIClient, "anthropic": AnthropicClient, "google": GoogleClient}


def make_client(spec: str, base_url: Optional[str] = None, script: Optional[dict] = None) -> ModelClient:
    """Build a client from ``mock`` or ``<provider>:<model>``."""
    if spec == "mock" or spec.startswith("mock:"):
        model_id = spec if ":" in spec else "mock"
        return ScriptedMockClient(script, model_id=model_id)
    provider, sep, model = spec.partition(":")
    if not sep or provider not in PROVIDERS or not model:
        raise ValueError(f"unknown client {spec!r}; use 'mock' or one of "
                         f"{', '.join(p + ':<model>' for p in PROVIDERS)}")
    client = PROVIDERS[provider](model, base_url=base_url)
    if not client.api_key:
        raise ValueError(f"set DRAWBENCH_{provider.upper()}_KEY to use {spec}")
    return client
