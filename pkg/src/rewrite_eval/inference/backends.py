"""Model backends and the single-request completion contract.

A backend turns a :class:`CompletionRequest` into raw text. :func:`complete`
adds what every backend shares: retries with exponential backoff on
transient failures and cleanup of the raw completion (prompt echo, the
completion cue, and everything after the stop marker).
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

import requests

from ..corpus import read_lines
from ..errors import BackendError, ConfigError, ProtocolError, UsageError
from .prompts import DecodingConfig

__all__ = [
    "CompletionRequest",
    "TransientBackendError",
    "Backend",
    "EchoBackend",
    "FileBackend",
    "HttpBackend",
    "clean_completion",
    "complete",
    "build_backend",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    config: DecodingConfig = field(default_factory=DecodingConfig)
    text: Optional[str] = None
    record_id: Optional[int] = None
    completion_cue: Optional[str] = None


class TransientBackendError(BackendError):
    """A failure worth retrying (connection reset, timeout, HTTP 429/5xx)."""


class Backend:
    """Base class. Subclasses implement :meth:`generate`."""

    #: whether :func:`complete` should strip prompt echo and truncate at the stop marker
    postprocess = True
    max_retries = 0
    backoff_seconds = 0.5

    def __init__(self, backend_id: str):
        self.backend_id = backend_id

    def generate(self, request: CompletionRequest) -> str:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"id": self.backend_id, "type": type(self).__name__}


class EchoBackend(Backend):
    """Test double that behaves like a model copying its input after echoing the prompt."""

    def generate(self, request):
        if request.text is None:
            raise ProtocolError("echo backend needs the request's input text", self.backend_id, 1)
        return f"{request.prompt} {request.text}"


class FileBackend(Backend):
    """Serves predictions preloaded from a line-parallel file, keyed by record id."""

    postprocess = False

    def __init__(self, backend_id: str, path=None, lines: Optional[Sequence[str]] = None):
        super().__init__(backend_id)
        if (path is None) == (lines is None):
            raise ConfigError("file backend needs exactly one of 'path' or 'lines'")
        self.path = None if path is None else Path(path)
        self.lines = list(lines) if lines is not None else read_lines(self.path)

    def generate(self, request):
        rid = request.record_id
        if rid is None or not 0 <= rid < len(self.lines):
            raise BackendError(f"file backend has no line for record {rid}", self.backend_id, 1)
        return self.lines[rid]

    def describe(self):
        return {**super().describe(), "path": None if self.path is None else str(self.path)}


_TRANSIENT_STATUS = {408, 429, 500, 502, 503, 504}


class HttpBackend(Backend):
    """JSON completion endpoint in either the ``completions`` or ``chat`` dialect."""

    def __init__(
        self,
        backend_id: str,
        base_url: str,
        model: str,
        api_key_env: Optional[str] = None,
        timeout: float = 60.0,
        dialect: str = "completions",
        max_retries: int = 3,
        backoff_seconds: float = 0.5,
    ):
        super().__init__(backend_id)
        if dialect not in ("completions", "chat"):
            raise ConfigError(f"unknown HTTP dialect {dialect!r}")
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.dialect = dialect
        self.max_retries = max_retries
        self.backoff_seconds = backoff_seconds

    @property
    def url(self) -> str:
        return f"{self.base_url}/{'chat/completions' if self.dialect == 'chat' else 'completions'}"

    def payload(self, request: CompletionRequest) -> dict:
        body = {
            "model": self.model,
            "temperature": request.config.effective_temperature,
            "max_tokens": request.config.max_new_tokens,
        }
        if self.dialect == "chat":
            body["messages"] = [{"role": "user", "content": request.prompt}]
        else:
            body["prompt"] = request.prompt
        return body

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key_env:
            token = os.environ.get(self.api_key_env)
            if not token:
                raise BackendError(f"environment variable {self.api_key_env} is not set", self.backend_id, 0)
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def generate(self, request):
        try:
            resp = requests.post(self.url, json=self.payload(request), headers=self._headers(), timeout=self.timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            raise TransientBackendError(str(exc), self.backend_id) from exc
        if resp.status_code in _TRANSIENT_STATUS:
            raise TransientBackendError(f"HTTP {resp.status_code}", self.backend_id)
        if resp.status_code >= 400:
            raise BackendError(f"HTTP {resp.status_code}: {resp.text[:200]}", self.backend_id, 1)
        try:
            choice = resp.json()["choices"][0]
            text = choice["message"]["content"] if self.dialect == "chat" else choice["text"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"malformed response: {resp.text[:200]!r}", self.backend_id, 1) from exc
        if not isinstance(text, str):
            raise ProtocolError(f"completion text is {type(text).__name__}, not str", self.backend_id, 1)
        return text

    def describe(self):
        return {
            **super().describe(),
            "base_url": self.base_url,
            "model": self.model,
            "dialect": self.dialect,
        }


def clean_completion(raw: str, prompt: str, completion_cue: Optional[str], stop_marker: Optional[str]) -> str:
    """Strip an echoed prompt (or everything through the cue), then cut at the stop marker.

    >>> clean_completion("Fix: a | Fixed: b\\nmore", "Fix: a | Fixed:", "Fixed:", "\\n")
    'b'
    """
    text = raw
    if text.startswith(prompt):
        text = text[len(prompt):]
    elif completion_cue and completion_cue in text:
        text = text.split(completion_cue, 1)[1]
    text = text.lstrip()
    if stop_marker:
        text = text.split(stop_marker, 1)[0]
    return text.strip()


def complete(
    backend: Backend,
    prompt: str,
    config: Optional[DecodingConfig] = None,
    *,
    text: Optional[str] = None,
    record_id: Optional[int] = None,
    completion_cue: Optional[str] = None,
    sleep: Callable[[float], None] = time.sleep,
) -> str:
    """Request one completion, retrying transient failures with exponential backoff."""
    if not prompt:
        raise UsageError("prompt must be non-empty")
    request = CompletionRequest(prompt, config or DecodingConfig(), text, record_id, completion_cue)
    attempts = 0
    while True:
        attempts += 1
        try:
            raw = backend.generate(request)
            break
        except TransientBackendError as exc:
            if attempts > backend.max_retries:
                raise BackendError(
                    f"backend {backend.backend_id} failed after {attempts} attempts: {exc}",
                    backend.backend_id,
                    attempts,
                ) from exc
            delay = backend.backoff_seconds * 2 ** (attempts - 1)
            log.warning("backend %s: %s; retrying in %.2fs", backend.backend_id, exc, delay)
            sleep(delay)
    if not backend.postprocess:
        return raw
    return clean_completion(raw, prompt, completion_cue, request.config.stop_marker)


def build_backend(backend_id: str, settings: Mapping, base_dir=None) -> Backend:
    """Construct a backend from a config mapping with a ``type`` of echo, file or http."""
    settings = dict(settings)
    kind = settings.pop("type", None)
    try:
        if kind == "echo":
            return EchoBackend(backend_id)
        if kind == "file":
            path = Path(settings.pop("path"))
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            if not path.is_file():
                raise ConfigError(f"backend {backend_id}: prediction file {path} not found")
            return FileBackend(backend_id, path=path)
        if kind == "http":
            return HttpBackend(backend_id, **settings)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"backend {backend_id}: invalid settings ({exc})") from None
    raise ConfigError(f"backend {backend_id}: unknown type {kind!r}")
