"""Text-generation backends: a remote chat-completions client and a
deterministic scripted backend for offline replay.

The scripted backend maps SHA-256 hashes of exact prompt strings to canned
responses, so recorded sessions replay byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import requests

DEFAULT_PROMPT_LIMIT = 16000
DEFAULT_API_KEY_ENV = "QACHECK_API_KEY"
API_BASE_ENV = "QACHECK_API_BASE"
BACKOFF_BASE_S = 0.5
BACKOFF_FACTOR = 2.0


class BackendError(Exception):
    pass


class AuthError(BackendError):
    pass


class GenTimeoutError(BackendError):
    """Transport kept failing after all retries were exhausted."""


class ScriptMissError(BackendError):
    """The scripted backend has no entry for the requested prompt."""


class ScriptParseError(BackendError):
    pass


@dataclass(frozen=True)
class GenRequest:
    prompt: str
    max_tokens: int = 256
    temperature: float = 0.0
    stop_sequences: tuple[str, ...] = ()
    prompt_limit: int = DEFAULT_PROMPT_LIMIT

    def __post_init__(self) -> None:
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be > 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if len(self.prompt) > self.prompt_limit:
            raise ValueError(
                f"prompt length {len(self.prompt)} exceeds limit {self.prompt_limit}"
            )
        object.__setattr__(self, "stop_sequences", tuple(self.stop_sequences))


@dataclass(frozen=True)
class GenResponse:
    text: str
    finish_reason: str  # "stop" | "length" | "error"
    latency_ms: int = 0


@dataclass(frozen=True)
class BackendConfig:
    kind: str  # "remote" | "scripted"
    base_url: Optional[str] = None
    model_name: Optional[str] = None
    api_key_env: str = DEFAULT_API_KEY_ENV
    timeout_ms: int = 30000
    max_retries: int = 2
    script_path: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in ("remote", "scripted"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "remote" and not (self.base_url or os.environ.get(API_BASE_ENV)):
            raise ValueError("remote backend requires base_url")
        if self.kind == "remote" and not self.model_name:
            raise ValueError("remote backend requires model_name")
        if self.kind == "scripted" and not self.script_path:
            raise ValueError("scripted backend requires script_path")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @classmethod
    def from_dict(cls, d: dict) -> "BackendConfig":
        return cls(
            kind=d["kind"],
            base_url=d.get("base_url"),
            model_name=d.get("model_name"),
            api_key_env=d.get("api_key_env", DEFAULT_API_KEY_ENV),
            timeout_ms=d.get("timeout_ms", 30000),
            max_retries=d.get("max_retries", 2),
            script_path=d.get("script_path"),
        )


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class ScriptedBackend:
    """Replays recorded responses keyed by prompt content hash.

    Script file is JSON Lines: {"key": sha256-hex, "prompt_prefix": str,
    "response": str} per line.
    """

    def __init__(self, entries: dict[str, str]):
        self._entries = dict(entries)

    def generate(self, req: GenRequest) -> GenResponse:
        key = prompt_key(req.prompt)
        if key not in self._entries:
            raise ScriptMissError(
                f"no scripted response for prompt starting: {req.prompt[:80]!r}"
            )
        return GenResponse(text=self._entries[key], finish_reason="stop", latency_ms=0)


def load_script(path: str | Path) -> ScriptedBackend:
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                key = row["key"]
                response = row["response"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ScriptParseError(f"malformed script entry at line {lineno}: {exc}")
            if key in entries:
                raise ScriptParseError(f"duplicate prompt key at line {lineno}")
            entries[key] = response
    return ScriptedBackend(entries)


def dump_script(exchanges: list[tuple[str, str]], path: str | Path) -> None:
    """Write (prompt, response) pairs in the scripted replay file format."""
    with open(path, "w", encoding="utf-8") as fh:
        for prompt, response in exchanges:
            fh.write(
                json.dumps(
                    {
                        "key": prompt_key(prompt),
                        "prompt_prefix": prompt[:80],
                        "response": response,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


class RemoteBackend:
    """Chat-completions client with exponential-backoff retry.

    Retries transport failures and 429/5xx; never retries 401.
    """

    def __init__(self, config: BackendConfig, sleep: Callable[[float], None] = time.sleep):
        self.config = config
        self._sleep = sleep
        self._session = requests.Session()

    def _base_url(self) -> str:
        return (os.environ.get(API_BASE_ENV) or self.config.base_url or "").rstrip("/")

    def generate(self, req: GenRequest) -> GenResponse:
        api_key = os.environ.get(self.config.api_key_env)
        if not api_key:
            raise AuthError(
                f"environment variable {self.config.api_key_env} is not set"
            )
        payload = {
            "model": self.config.model_name,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
            "stop": list(req.stop_sequences),
        }
        url = f"{self._base_url()}/v1/chat/completions"
        timeout_s = self.config.timeout_ms / 1000.0
        attempts = self.config.max_retries + 1
        last_error: Optional[Exception] = None
        started = time.monotonic()

        for attempt in range(attempts):
            if attempt > 0:
                self._sleep(BACKOFF_BASE_S * BACKOFF_FACTOR ** (attempt - 1))
            try:
                resp = self._session.post(
                    url,
                    json=payload,
                    headers={"Authorization": f"Bearer {api_key}"},
                    timeout=timeout_s,
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if resp.status_code == 401:
                raise AuthError(f"authentication rejected by {url}")
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = BackendError(f"HTTP {resp.status_code} from {url}")
                continue
            resp.raise_for_status()
            body = resp.json()
            choice = body["choices"][0]
            latency_ms = int((time.monotonic() - started) * 1000)
            return GenResponse(
                text=choice["message"]["content"],
                finish_reason=choice.get("finish_reason", "stop"),
                latency_ms=latency_ms,
            )

        raise GenTimeoutError(
            f"gave up on {url} after {attempts} attempts: {last_error}"
        )


def make_backend(config: BackendConfig):
    if config.kind == "scripted":
        return load_script(config.script_path)
    return RemoteBackend(config)
