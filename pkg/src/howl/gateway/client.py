"""Provider-agnostic streaming chat client (OpenAI-compatible wire dialect)."""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, field, replace
from typing import AsyncIterator, Protocol

import httpx


class GatewayError(Exception):
    """Transport-level failure surfaced after the retry budget is spent."""


@dataclass(frozen=True)
class ChatRequest:
    messages: list[dict[str, str]]
    model: str
    temperature: float = 0.7
    max_tokens: int = 512
    stream: bool = True
    session_nonce: str = ""


@dataclass(frozen=True)
class Token:
    text: str


@dataclass(frozen=True)
class Done:
    finish_reason: str = "stop"


@dataclass(frozen=True)
class StreamError:
    cause: str


TokenEvent = Token | Done | StreamError


def cache_bust(req: ChatRequest, counter: int) -> ChatRequest:
    """Inject the session nonce and a per-request counter as an ignored tag in
    the system message, so an opaque server-side similarity cache never sees
    two byte-identical prompts from different sessions or turns."""
    tag = f"\n\n[ref:{req.session_nonce}-{counter}]"
    messages = [dict(m) for m in req.messages]
    for m in messages:
        if m.get("role") == "system":
            m["content"] = m.get("content", "") + tag
            break
    else:
        messages.insert(0, {"role": "system", "content": tag.strip()})
    return replace(req, messages=messages)


def request_payload(req: ChatRequest) -> bytes:
    """Exact request body bytes; shared by the HTTP backend and the tests."""
    body = {
        "model": req.model,
        "messages": req.messages,
        "temperature": req.temperature,
        "max_tokens": req.max_tokens,
        "stream": req.stream,
    }
    return json.dumps(body, sort_keys=True, ensure_ascii=True).encode("utf-8")


class ChatBackend(Protocol):
    def stream(self, req: ChatRequest) -> AsyncIterator[TokenEvent]: ...

    async def complete(self, req: ChatRequest) -> str: ...


class ChatClient:
    """Adds cache busting and a per-session request counter over a backend.

    Shareable as read-only configuration; each stream has exactly one reader.
    """

    def __init__(self, backend: ChatBackend, session_nonce: str):
        self._backend = backend
        self.session_nonce = session_nonce
        self._counter = 0

    def _prepare(self, req: ChatRequest) -> ChatRequest:
        if not req.session_nonce:
            req = replace(req, session_nonce=self.session_nonce)
        busted = cache_bust(req, self._counter)
        self._counter += 1
        return busted

    async def stream_chat(self, req: ChatRequest) -> AsyncIterator[TokenEvent]:
        async for event in self._backend.stream(self._prepare(req)):
            yield event

    async def complete(self, req: ChatRequest) -> str:
        return await self._backend.complete(
            self._prepare(replace(req, stream=False))
        )


@dataclass
class HttpChatBackend:
    """Speaks `POST {base_url}/chat/completions` with SSE incremental chunks."""

    base_url: str
    api_key: str = ""
    timeout_s: float = 60.0
    retries: int = 2
    backoff_s: float = 0.5

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    @property
    def _url(self) -> str:
        return self.base_url.rstrip("/") + "/chat/completions"

    def _client(self) -> httpx.AsyncClient:
        return httpx.AsyncClient(timeout=self.timeout_s)

    async def stream(self, req: ChatRequest) -> AsyncIterator[TokenEvent]:
        body = request_payload(replace(req, stream=True))
        attempt = 0
        while True:
            yielded_any = False
            try:
                async with self._client() as client:
                    async with client.stream(
                        "POST", self._url, content=body, headers=self._headers()
                    ) as response:
                        response.raise_for_status()
                        finish = "stop"
                        async for line in response.aiter_lines():
                            if not line.startswith("data:"):
                                continue
                            data = line[len("data:"):].strip()
                            if data == "[DONE]":
                                break
                            try:
                                chunk = json.loads(data)
                                choice = chunk["choices"][0]
                            except (json.JSONDecodeError, LookupError, TypeError):
                                yield StreamError("malformed-chunk")
                                return
                            if choice.get("finish_reason"):
                                finish = choice["finish_reason"]
                            text = (choice.get("delta") or {}).get("content")
                            if text:
                                yielded_any = True
                                yield Token(text)
                        yield Done(finish)
                        return
            except (httpx.TransportError, httpx.HTTPStatusError) as exc:
                cause = (
                    "timeout" if isinstance(exc, httpx.TimeoutException)
                    else "connection-failure"
                )
                # never retry after the first token: partial speech must not repeat
                if yielded_any or attempt >= self.retries:
                    yield StreamError(cause)
                    return
                attempt += 1
                await asyncio.sleep(self.backoff_s * (2 ** (attempt - 1)))

    async def complete(self, req: ChatRequest) -> str:
        body = request_payload(replace(req, stream=False))
        attempt = 0
        while True:
            try:
                async with self._client() as client:
                    response = await client.post(
                        self._url, content=body, headers=self._headers()
                    )
                    response.raise_for_status()
                    return response.json()["choices"][0]["message"]["content"]
            except (httpx.TransportError, httpx.HTTPStatusError):
                if attempt >= self.retries:
                    raise GatewayError("chat completion failed after retries")
                attempt += 1
                await asyncio.sleep(self.backoff_s * (2 ** (attempt - 1)))
