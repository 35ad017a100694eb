"""Uniform completion contract over model backends.

Two backends ship: a deterministic scripted backend replaying canned
replies for tests and demos, and an HTTP backend speaking the common
chat-completions wire format. A router resolves which backend serves
each loop phase (planning / clarify / respond / fix) from configuration,
so every phase can use a different model.

Credentials are read from an environment variable named in the config
and are never logged, persisted, or echoed in error messages.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

logger = logging.getLogger(__name__)

REQUEST_TAGS = ("planning", "clarify", "respond", "fix")

# Low temperature stabilizes structured output parsing; answers get room.
DEFAULT_TEMPERATURES = {"planning": 0.2, "clarify": 0.2, "respond": 0.7, "fix": 0.2}
DEFAULT_MAX_TOKENS = 1024
DEFAULT_TIMEOUT_S = 30.0


class GatewayError(Exception):
    pass


class BackendUnavailable(GatewayError):
    def __init__(self, cause: str):
        self.cause = cause
        super().__init__(cause)


class ScenarioExhausted(BackendUnavailable):
    def __init__(self, scenario_id: str):
        self.scenario_id = scenario_id
        super().__init__(f"scripted scenario {scenario_id!r} has no step left to serve")


class RemoteError(GatewayError):
    def __init__(self, status: int, body_excerpt: str):
        self.status = status
        self.body_excerpt = body_excerpt
        super().__init__(f"remote backend returned {status}: {body_excerpt}")


class ScenarioParseError(GatewayError):
    def __init__(self, line: int | str, reason: str):
        self.line = line
        super().__init__(f"scenario step {line}: {reason}")


@dataclass(frozen=True, slots=True)
class Message:
    role: str  # "system" | "user" | "assistant"
    content: str


@dataclass(frozen=True, slots=True)
class CompletionRequest:
    messages: tuple[Message, ...]
    request_tag: str = "planning"
    backend_id: str | None = None
    temperature: float | None = None
    max_tokens: int = DEFAULT_MAX_TOKENS

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.messages[0].role != "system":
            raise ValueError("first message must carry the system role")

    def joined_text(self) -> str:
        return "\n".join(m.content for m in self.messages)


class Backend(Protocol):
    def complete(self, request: CompletionRequest) -> str: ...


@dataclass(frozen=True, slots=True)
class ScenarioStep:
    reply: str
    match: str | None = None  # substring the request must contain; None = ordinal


@dataclass(frozen=True, slots=True)
class ScriptedScenario:
    scenario_id: str
    steps: tuple[ScenarioStep, ...]


def load_scenario(path: str | Path) -> ScriptedScenario:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    steps = []
    for i, raw in enumerate(obj.get("steps", []), start=1):
        if not isinstance(raw, dict) or not isinstance(raw.get("reply"), str):
            raise ScenarioParseError(i, "step must be an object with a string 'reply'")
        match = raw.get("match")
        if match is not None and not isinstance(match, str):
            raise ScenarioParseError(i, "'match' must be a string when present")
        steps.append(ScenarioStep(reply=raw["reply"], match=match))
    scenario_id = obj.get("scenario_id")
    if not isinstance(scenario_id, str) or not scenario_id:
        raise ScenarioParseError("header", "missing scenario_id")
    return ScriptedScenario(scenario_id=scenario_id, steps=tuple(steps))


class ScriptedBackend:
    """Replays scenario steps; each step serves at most one request.

    Steps are scanned in order. A step with a ``match`` substring only
    fires when the request text contains it; a step without one fires
    unconditionally. Same scenario + same request sequence = same
    replies, which the golden-transcript tests rely on.
    """

    def __init__(self, scenario: ScriptedScenario):
        self.scenario = scenario
        self._consumed = [False] * len(scenario.steps)
        self._lock = threading.Lock()

    def complete(self, request: CompletionRequest) -> str:
        text = request.joined_text()
        with self._lock:
            for i, step in enumerate(self.scenario.steps):
                if self._consumed[i]:
                    continue
                if step.match is not None and step.match not in text:
                    continue
                self._consumed[i] = True
                return step.reply
        raise ScenarioExhausted(self.scenario.scenario_id)


class HttpBackend:
    """Chat-completions client compatible with the common wire format."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key_env: str | None = None,
        timeout_s: float = DEFAULT_TIMEOUT_S,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self._api_key = os.environ.get(api_key_env, "") if api_key_env else ""
        self.timeout_s = timeout_s

    def complete(self, request: CompletionRequest) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": (
                request.temperature
                if request.temperature is not None
                else DEFAULT_TEMPERATURES.get(request.request_tag, 0.2)
            ),
            "max_tokens": request.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout_s,
            )
        except httpx.HTTPError as exc:
            # Deadline expiry and connection trouble surface identically;
            # exc text never includes credentials.
            raise BackendUnavailable(f"{type(exc).__name__} contacting {self.base_url}") from exc
        if response.status_code != 200:
            raise RemoteError(response.status_code, response.text[:200])
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise RemoteError(response.status_code, "malformed completion payload") from exc


class Gateway:
    """Backend registry plus per-tag routing."""

    def __init__(self, backends: dict[str, Backend], routing: dict[str, str]):
        missing = [bid for bid in routing.values() if bid not in backends]
        if missing:
            raise GatewayError(f"routing names unknown backends: {missing}")
        if "default" not in routing:
            raise GatewayError("routing must name a 'default' backend")
        self._backends = backends
        self._routing = routing

    def resolve(self, request: CompletionRequest) -> str:
        if request.backend_id is not None:
            return request.backend_id
        return self._routing.get(request.request_tag, self._routing["default"])

    def complete(self, request: CompletionRequest) -> str:
        backend_id = self.resolve(request)
        backend = self._backends.get(backend_id)
        if backend is None:
            raise BackendUnavailable(f"no backend registered under id {backend_id!r}")
        logger.debug("completion via backend=%s tag=%s", backend_id, request.request_tag)
        return backend.complete(request)


@dataclass
class RecordingBackend:
    """Test double that wraps a backend and keeps every request."""

    inner: Backend
    requests: list[CompletionRequest] = field(default_factory=list)

    def complete(self, request: CompletionRequest) -> str:
        self.requests.append(request)
        return self.inner.complete(request)
