"""Prompt-grid construction and batched collection of poem completions.

The full grid is the Cartesian product of 3 writing-prompt templates, 24
styles, and 40 subjects (2,880 prompts). Completions are collected from an
OpenAI-compatible chat-completions endpoint and written incrementally as
JSON Lines in the corpus format, so an interrupted run can resume without
duplicating any (model, template, style, subject) key.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .corpus import CANONICAL_STYLES, Corpus, load_corpus

logger = logging.getLogger(__name__)

_BASE = "Write a poem about the subject of {subject} in the following form or style: {style}."

PROMPT_TEMPLATES = {
    "general": _BASE,
    "figurative": _BASE + " Do not use the actual word(s) {subject} or {style} in the poem.",
    "specific": _BASE + " Make the poem about something specific.",
}

DEFAULT_TEMPLATES = ("general", "figurative", "specific")

DEFAULT_STYLES = CANONICAL_STYLES

# Broad subject tags: nine general topics, eleven occasions, twenty holidays.
DEFAULT_SUBJECTS = (
    "activities",
    "arts & sciences",
    "living",
    "love",
    "mythology & folklore",
    "nature",
    "religion",
    "relationships",
    "social commentaries",
    "anniversary",
    "birth",
    "birthdays",
    "engagement",
    "farewells & good luck",
    "funerals",
    "get well & recovery",
    "graduation",
    "gratitude & apologies",
    "toasts & celebrations",
    "weddings",
    "christmas",
    "cinco de mayo",
    "easter",
    "father's day",
    "halloween",
    "hanukkah",
    "independence day",
    "kwanzaa",
    "labor day",
    "memorial day",
    "mother's day",
    "new year",
    "passover",
    "ramadan",
    "rosh hashanah",
    "september 11th",
    "st. patrick's day",
    "thanksgiving",
    "valentine's day",
    "yom kippur",
)


@dataclass(frozen=True)
class PromptSpec:
    template: str
    style: str
    subject: str
    rendered: str


def render_prompt(template: str, style: str, subject: str) -> str:
    if template not in PROMPT_TEMPLATES:
        raise ValueError(f"unknown template {template!r}")
    return PROMPT_TEMPLATES[template].format(subject=subject, style=style)


def build_grid(
    styles: tuple[str, ...] = DEFAULT_STYLES,
    subjects: tuple[str, ...] = DEFAULT_SUBJECTS,
    templates: tuple[str, ...] = DEFAULT_TEMPLATES,
) -> list[PromptSpec]:
    """Cartesian product of prompts in deterministic (template, style, subject) order."""
    if not styles:
        raise ValueError("styles must be non-empty")
    if not subjects:
        raise ValueError("subjects must be non-empty")
    if not templates:
        raise ValueError("templates must be non-empty")
    return [
        PromptSpec(
            template=template,
            style=style,
            subject=subject,
            rendered=render_prompt(template, style, subject),
        )
        for template in templates
        for style in styles
        for subject in subjects
    ]


def source_for_model(model: str) -> str:
    """Map a model identifier to a corpus source label."""
    normalized = model.lower()
    if normalized.startswith(("gpt-3.5", "gpt3.5", "gpt35")):
        return "gpt35"
    if normalized.startswith(("gpt-4", "gpt4")):
        return "gpt4"
    return f"model:{model}"


_SLUG_RE = re.compile(r"[^a-z0-9]+")


def _slug(text: str) -> str:
    return _SLUG_RE.sub("-", text.lower()).strip("-")


def spec_key(spec: PromptSpec) -> tuple[str, str, str]:
    return (spec.template, spec.style, spec.subject)


def record_id_for(model: str, spec: PromptSpec) -> str:
    return f"{_slug(model)}_{spec.template}_{_slug(spec.style)}_{_slug(spec.subject)}"


class AuthenticationError(RuntimeError):
    """The endpoint rejected our credentials; the job must abort."""


class TransientRequestError(RuntimeError):
    """Throttling or server-side failure; the request may be retried."""


class RequestFailed(RuntimeError):
    """A non-retryable request failure."""


class ChatCompletionsClient:
    """Minimal client for an OpenAI-compatible chat-completions endpoint."""

    def __init__(self, endpoint: str, api_key: str, timeout: float = 120.0):
        self.endpoint = endpoint
        self.timeout = timeout
        self._session = requests.Session()
        self._session.headers["Authorization"] = f"Bearer {api_key}"

    def complete(self, model: str, prompt: str, temperature: float, max_tokens: int) -> str:
        payload = {
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        try:
            response = self._session.post(self.endpoint, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransientRequestError(f"request failed: {exc}") from exc
        if response.status_code in (401, 403):
            raise AuthenticationError(f"endpoint returned {response.status_code}")
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientRequestError(f"endpoint returned {response.status_code}")
        if response.status_code != 200:
            raise RequestFailed(f"endpoint returned {response.status_code}: {response.text[:200]}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError) as exc:
            raise RequestFailed(f"malformed completion response: {exc}") from exc


@dataclass
class GenerationJob:
    """One batch of prompt specs to collect for a single model."""

    model: str
    specs: list[PromptSpec]
    output_path: Path
    temperature: float = 1.0
    max_output_tokens: int = 1024
    max_retries: int = 3
    backoff_base: float = 0.5
    rate_limit_per_sec: float | None = None
    concurrency: int = 4
    resume: bool = True


class _RateLimiter:
    """Spaces request starts at least 1/rate seconds apart."""

    def __init__(self, rate_per_sec: float | None):
        self._interval = 1.0 / rate_per_sec if rate_per_sec else 0.0
        self._lock = threading.Lock()
        self._next_allowed = 0.0

    def wait(self) -> None:
        if not self._interval:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next_allowed - now
            self._next_allowed = max(now, self._next_allowed) + self._interval
        if delay > 0:
            time.sleep(delay)


def _completed_keys(path: Path) -> set[tuple[str, str, str]]:
    """Keys already present in the output file, repairing a torn tail.

    A run killed mid-write can leave an incomplete final line; that tail is
    truncated away (the spec will be refetched) so appends start clean.
    """
    keys: set[tuple[str, str, str]] = set()
    if not path.exists():
        return keys
    data = path.read_bytes()
    offset = 0
    last_good_end = 0
    for raw_line in data.splitlines(keepends=True):
        stripped = raw_line.strip()
        if stripped:
            try:
                raw = json.loads(stripped)
                keys.add((raw.get("template"), raw.get("style"), raw.get("subject")))
                last_good_end = offset + len(raw_line)
            except json.JSONDecodeError:
                if offset + len(raw_line) == len(data):
                    logger.warning("%s: dropping torn trailing line during resume", path)
                else:
                    logger.warning("%s: ignoring unparseable line during resume", path)
                    last_good_end = offset + len(raw_line)
        else:
            last_good_end = offset + len(raw_line)
        offset += len(raw_line)
    if last_good_end < len(data):
        with open(path, "r+b") as handle:
            handle.truncate(last_good_end)
    return keys


def run_job(job: GenerationJob, client: ChatCompletionsClient) -> Corpus:
    """Collect all pending specs, appending each completion as it arrives.

    Progress is persisted after every response; rerunning with resume skips
    specs already present in the output file. Requests hitting throttle or
    server errors are retried with exponential backoff; specs that still
    fail are recorded in a ".failures.jsonl" sidecar and skipped.
    """
    output_path = Path(job.output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    done = _completed_keys(output_path) if job.resume else set()
    if not job.resume and output_path.exists():
        output_path.unlink()
    output_path.touch(exist_ok=True)
    pending = [s for s in job.specs if spec_key(s) not in done]
    logger.info(
        "model %s: %d specs requested, %d already complete, %d pending",
        job.model, len(job.specs), len(job.specs) - len(pending), len(pending),
    )

    limiter = _RateLimiter(job.rate_limit_per_sec)
    write_lock = threading.Lock()
    failures_path = output_path.with_suffix(output_path.suffix + ".failures.jsonl")

    def fetch(spec: PromptSpec) -> None:
        text: str | None = None
        last_error: Exception | None = None
        for attempt in range(job.max_retries + 1):
            limiter.wait()
            try:
                text = client.complete(
                    job.model, spec.rendered, job.temperature, job.max_output_tokens
                )
                break
            except AuthenticationError:
                raise
            except TransientRequestError as exc:
                last_error = exc
                if attempt < job.max_retries:
                    logger.warning(
                        "retrying %s after %s (attempt %d)", spec_key(spec), exc, attempt + 1
                    )
                    time.sleep(job.backoff_base * (2 ** attempt))
            except RequestFailed as exc:
                last_error = exc
                break
        if text is not None and not text.strip():
            last_error = RequestFailed("empty completion text")
            text = None
        if text is None:
            row = {
                "template": spec.template,
                "style": spec.style,
                "subject": spec.subject,
                "error": str(last_error),
            }
            with write_lock, open(failures_path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(row, ensure_ascii=False) + "\n")
            logger.error("giving up on %s: %s", spec_key(spec), last_error)
            return
        record = {
            "id": record_id_for(job.model, spec),
            "text": text,
            "source": source_for_model(job.model),
            "style": spec.style,
            "subject": spec.subject,
            "template": spec.template,
            "model": job.model,
        }
        with write_lock, open(output_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")

    if pending:
        with ThreadPoolExecutor(max_workers=job.concurrency) as executor:
            futures = [executor.submit(fetch, spec) for spec in pending]
            try:
                for future in futures:
                    future.result()
            except AuthenticationError:
                executor.shutdown(cancel_futures=True)
                raise
    return load_corpus(output_path, "json-lines")
