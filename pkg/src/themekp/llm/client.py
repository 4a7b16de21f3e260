"""Chat-completion client with retries, rate limiting and a transcript store.

Every exchange is recorded under (template_id, post_id, run).  In replay
mode the store is the only source of responses and no request is sent.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable

logger = logging.getLogger(__name__)

RETRY_STATUS = frozenset({429, 500, 502, 503, 504})


class LlmError(RuntimeError):
    pass


class LlmConfigError(LlmError):
    pass


@dataclass
class LlmConfig:
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.0
    n_runs: int = 5
    max_retries: int = 4
    rate_limit: float = 1.0          # requests per second, 0 disables
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    backoff: float = 1.0             # first retry delay in seconds, doubled each time
    timeout: float = 120.0
    concurrency: int = 4

    def __post_init__(self):
        if self.temperature < 0:
            raise LlmConfigError("temperature must be >= 0")
        if self.n_runs < 1:
            raise LlmConfigError("n_runs must be >= 1")
        if self.max_retries < 0 or self.rate_limit < 0 or self.concurrency < 1:
            raise LlmConfigError("max_retries and rate_limit must be >= 0, concurrency >= 1")


# -- transcripts -------------------------------------------------------------------

class TranscriptStore:
    """JSONL transcript file keyed by (template_id, post_id, run); appends are serialised."""

    def __init__(self, path=None):
        self.path = path
        self.records: dict[tuple[str, str, int], dict] = {}
        self._lock = threading.Lock()
        if path is not None and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for n, line in enumerate(fh, start=1):
                    if not line.strip():
                        continue
                    try:
                        rec = json.loads(line)
                        key = (rec["template_id"], str(rec["post_id"]), int(rec["run"]))
                    except (ValueError, KeyError, TypeError) as exc:
                        raise LlmError(f"{path}:{n}: bad transcript record: {exc}") from exc
                    self.records[key] = rec

    def get(self, template_id: str, post_id: str, run: int) -> dict | None:
        return self.records.get((template_id, str(post_id), int(run)))

    def add(self, template_id: str, post_id: str, run: int, prompt: str, response: str,
            timestamp: str | None = None) -> dict:
        rec = {"template_id": template_id, "post_id": str(post_id), "run": int(run),
               "prompt": prompt, "response": response,
               "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")}
        with self._lock:
            self.records[(template_id, str(post_id), int(run))] = rec
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        return rec

    def runs(self, template_id: str) -> list[int]:
        return sorted({r for t, _, r in self.records if t == template_id})

    def __len__(self):
        return len(self.records)


# -- HTTP ----------------------------------------------------------------------------

Transport = Callable[[str, bytes, dict, float], tuple[int, bytes]]


def urllib_transport(url: str, body: bytes, headers: dict, timeout: float) -> tuple[int, bytes]:
    req = urllib.request.Request(url, data=body, headers=headers, method="POST")
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read()


class RateLimiter:
    def __init__(self, per_second: float, clock=time.monotonic, sleep=time.sleep):
        self.interval = 1.0 / per_second if per_second > 0 else 0.0
        self.clock = clock
        self.sleep = sleep
        self._next = 0.0
        self._lock = threading.Lock()

    def wait(self) -> None:
        if not self.interval:
            return
        with self._lock:
            now = self.clock()
            start = max(now, self._next)
            self._next = start + self.interval
        if start > now:
            self.sleep(start - now)


class LlmClient:
    """Sends prompts, or answers them from transcripts when ``replay`` is set."""

    def __init__(self, config: LlmConfig | None = None, store: TranscriptStore | None = None, *,
                 replay: bool = False, api_key: str | None = None,
                 transport: Transport | None = None, sleep: Callable[[float], None] = time.sleep):
        self.config = config or LlmConfig()
        self.store = store if store is not None else TranscriptStore()
        self.replay = replay
        self.transport = transport or urllib_transport
        self.sleep = sleep
        self.api_key = api_key if api_key is not None else os.environ.get("LLM_API_KEY")
        if not replay and not self.api_key:
            raise LlmConfigError("LLM_API_KEY is not set (use replay mode to run offline)")
        self.limiter = RateLimiter(self.config.rate_limit, sleep=sleep)
        self.requests = 0

    def _request(self, prompt: str, post_id: str) -> str:
        cfg = self.config
        body = json.dumps({"model": cfg.model_id, "temperature": cfg.temperature,
                           "messages": [{"role": "user", "content": prompt}]}).encode("utf-8")
        headers = {"Content-Type": "application/json", "Authorization": f"Bearer {self.api_key}"}
        last = ""
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                delay = cfg.backoff * 2 ** (attempt - 1)
                logger.info("post %s: retry %d in %.1fs (%s)", post_id, attempt, delay, last)
                self.sleep(delay)
            self.limiter.wait()
            self.requests += 1
            try:
                status, payload = self.transport(cfg.endpoint, body, headers, cfg.timeout)
            except OSError as exc:
                last = f"network error: {exc}"
                continue
            if status in RETRY_STATUS:
                last = f"HTTP {status}"
                continue
            if status != 200:
                raise LlmError(f"post {post_id}: HTTP {status}: {payload[:200]!r}")
            try:
                return json.loads(payload)["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise LlmError(f"post {post_id}: malformed response: {exc}") from exc
        raise LlmError(f"post {post_id}: giving up after {cfg.max_retries + 1} attempts ({last})")

    def call(self, prompt: str, template_id: str, post_id: str, run: int) -> str:
        rec = self.store.get(template_id, post_id, run)
        if self.replay:
            if rec is None:
                raise LlmError(f"post {post_id}: no transcript for {template_id} run {run}")
            return rec["response"]
        response = self._request(prompt, post_id)
        self.store.add(template_id, post_id, run, prompt, response)
        return response


def call_llm(prompt: str, config: LlmConfig | None = None, *, client: LlmClient | None = None,
             template_id: str = "adhoc", post_id: str = "-", run: int = 0) -> str:
    client = client or LlmClient(config)
    return client.call(prompt, template_id, post_id, run)
