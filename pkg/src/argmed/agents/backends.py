"""Text-generation backends.

A backend turns ``(role, context, instruction)`` into a completion string.
It holds no session state. Scripted and recorded backends are
deterministic; the remote one talks to a chat-completion HTTP endpoint.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol, Sequence

import httpx

from ..errors import BackendFailure, BackendTimeout, InvalidConfig

log = logging.getLogger(__name__)

Message = dict[str, str]

BACKEND_KINDS = ("scripted", "recorded", "remote")
DEFAULT_API_KEY_ENV = "ARGMED_API_KEY"
RETRY_STATUS = {408, 409, 429, 500, 502, 503, 504}


class AgentBackend(Protocol):
    deterministic: bool

    def complete(self, role: str, context: Sequence[Message], instruction: str) -> str:
        ...


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "scripted"
    endpoint: str | None = None
    model_name: str = ""
    temperature: float = 0.0
    timeout: float = 60.0
    max_retries: int = 3
    api_key_env: str | None = DEFAULT_API_KEY_ENV
    script_path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in BACKEND_KINDS:
            raise InvalidConfig(f"backend kind must be one of {BACKEND_KINDS}, got {self.kind!r}")
        if self.temperature < 0:
            raise InvalidConfig("temperature must be >= 0")
        if self.timeout <= 0:
            raise InvalidConfig("timeout must be positive")
        if self.max_retries < 0:
            raise InvalidConfig("max_retries must be >= 0")
        if self.kind == "remote" and not (self.endpoint and self.api_key_env):
            raise InvalidConfig("remote backend needs 'endpoint' and 'api_key_env'")
        if self.kind in ("scripted", "recorded") and not self.script_path:
            raise InvalidConfig(f"{self.kind} backend needs 'script_path'")

    @classmethod
    def from_dict(cls, d: dict, base_dir: str | Path | None = None) -> "BackendConfig":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(d) - set(known))
        if unknown:
            raise InvalidConfig(f"unknown backend config field(s): {', '.join(unknown)}")
        if "api_key" in d:
            raise InvalidConfig("put the credential in an environment variable and name it in api_key_env")
        if known.get("script_path") and base_dir is not None:
            known["script_path"] = str(Path(base_dir) / known["script_path"])
        return cls(**known)

    @classmethod
    def load(cls, path: str | Path) -> "BackendConfig":
        path = Path(path)
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")), path.parent)


class ScriptedBackend:
    """Returns canned completions in order and records every call."""

    deterministic = True

    def __init__(self, script: Sequence[str]):
        self.script = list(script)
        self.calls: list[tuple[str, list[Message], str]] = []
        self._pos = 0

    def complete(self, role: str, context: Sequence[Message], instruction: str) -> str:
        self.calls.append((role, [dict(m) for m in context], instruction))
        if self._pos >= len(self.script):
            raise BackendFailure(f"script exhausted after {len(self.script)} completion(s)")
        out = self.script[self._pos]
        self._pos += 1
        return out

    @property
    def remaining(self) -> int:
        return len(self.script) - self._pos


def scripted_backend(script: Sequence[str]) -> ScriptedBackend:
    return ScriptedBackend(script)


class RecordedBackend:
    """Replays a saved session: each call takes the next entry recorded for that role."""

    deterministic = True

    def __init__(self, entries: Sequence[dict]):
        self.entries = list(entries)
        self._pos: dict[str, int] = {}

    @classmethod
    def load(cls, path: str | Path) -> "RecordedBackend":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(doc["entries"] if isinstance(doc, dict) else doc)

    def complete(self, role: str, context: Sequence[Message], instruction: str) -> str:
        mine = [e for e in self.entries if e.get("role") == role]
        i = self._pos.get(role, 0)
        if i >= len(mine):
            raise BackendFailure(f"recording has no more {role} completions")
        self._pos[role] = i + 1
        return mine[i]["completion"]


class RecordingBackend:
    """Wraps another backend and keeps every completion for later replay."""

    def __init__(self, inner: AgentBackend):
        self.inner = inner
        self.deterministic = inner.deterministic
        self.entries: list[dict] = []
        self._lock = threading.Lock()

    def complete(self, role: str, context: Sequence[Message], instruction: str) -> str:
        out = self.inner.complete(role, context, instruction)
        with self._lock:
            self.entries.append({"role": role, "instruction": instruction, "completion": out})
        return out

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps({"entries": self.entries}, indent=2, ensure_ascii=False) + "\n",
                              encoding="utf-8")


class RemoteBackend:
    """Chat-completion client (OpenAI-style request and response bodies)."""

    deterministic = False

    def __init__(self, cfg: BackendConfig, transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep, backoff: float = 1.0):
        if cfg.kind != "remote":
            raise InvalidConfig("RemoteBackend needs a remote config")
        key = os.environ.get(cfg.api_key_env or "")
        if not key:
            raise BackendFailure(f"credential environment variable {cfg.api_key_env} is not set")
        self.cfg = cfg
        self._sleep = sleep
        self._backoff = backoff
        self._client = httpx.Client(
            timeout=cfg.timeout,
            transport=transport,
            headers={"Authorization": f"Bearer {key}"},
        )

    def request_body(self, role: str, context: Sequence[Message], instruction: str) -> dict:
        # ``role`` is the agent name; its description arrives as the system message in ``context``
        messages = [{"role": m.get("role", "user"), "content": m["content"]} for m in context]
        messages.append({"role": "user", "content": instruction})
        return {"model": self.cfg.model_name, "temperature": self.cfg.temperature, "messages": messages}

    def complete(self, role: str, context: Sequence[Message], instruction: str) -> str:
        body = self.request_body(role, context, instruction)
        attempts = self.cfg.max_retries + 1
        last: Exception | None = None
        for attempt in range(attempts):
            if attempt:
                delay = self._backoff * 2 ** (attempt - 1)
                log.warning("retrying chat completion in %.1fs (%s)", delay, last)
                self._sleep(delay)
            try:
                resp = self._client.post(self.cfg.endpoint, json=body)
            except httpx.TimeoutException as e:
                last = e
                continue
            except httpx.TransportError as e:
                last = e
                continue
            if resp.status_code in RETRY_STATUS:
                last = BackendFailure(f"HTTP {resp.status_code}")
                continue
            if resp.status_code >= 400:
                raise BackendFailure(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as e:
                raise BackendFailure(f"malformed completion response: {e!r}") from None
        if isinstance(last, httpx.TimeoutException):
            raise BackendTimeout(f"timed out after {attempts} attempt(s)")
        raise BackendFailure(f"giving up after {attempts} attempt(s): {last}")

    def close(self) -> None:
        self._client.close()


def remote_backend(cfg: BackendConfig, **kw) -> RemoteBackend:
    return RemoteBackend(cfg, **kw)


@dataclass
class BackendPair:
    generator: AgentBackend
    verifier: AgentBackend
    extra: dict = field(default_factory=dict)


def make_backends(cfg: BackendConfig) -> BackendPair:
    """Build generator and verifier backends from one config.

    A scripted ``script_path`` holds ``{"generator": [...], "verifier": [...]}``;
    a recorded one holds ``{"entries": [{"role", "completion"}, ...]}``.
    Remote backends share one client for both roles.
    """
    if cfg.kind == "scripted":
        doc = json.loads(Path(cfg.script_path).read_text(encoding="utf-8"))
        return BackendPair(ScriptedBackend(doc["generator"]), ScriptedBackend(doc["verifier"]))
    if cfg.kind == "recorded":
        rec = RecordedBackend.load(cfg.script_path)
        return BackendPair(rec, rec)
    remote = RemoteBackend(cfg)
    return BackendPair(remote, remote)
