"""Deterministic scripted chat backend; the timing knob models token latency."""

from __future__ import annotations

import asyncio
import re
from typing import AsyncIterator, Callable

from .client import ChatRequest, Done, StreamError, Token, TokenEvent

Script = str | list[str] | Callable[[ChatRequest], str]


def tokenize(text: str) -> list[str]:
    """Word/whitespace units whose concatenation is exactly the input."""
    return re.findall(r"\s+|\S+", text)


class MockChatBackend:
    """Replays scripted completions token by token.

    `script` may be one string, a list consumed call-by-call (the last entry
    repeats), or a callable of the request. `inter_token_delay` is the pause
    before each token, seconds.
    """

    def __init__(self, script: Script, inter_token_delay: float = 0.0,
                 fail: bool = False):
        self._script = script
        self.inter_token_delay = inter_token_delay
        self.fail = fail
        self._calls = 0
        self.requests: list[ChatRequest] = []  # kept for conformance tests

    def _resolve(self, req: ChatRequest) -> str:
        self.requests.append(req)
        index = self._calls
        self._calls += 1
        if callable(self._script):
            return self._script(req)
        if isinstance(self._script, list):
            return self._script[min(index, len(self._script) - 1)]
        return self._script

    async def stream(self, req: ChatRequest) -> AsyncIterator[TokenEvent]:
        if self.fail:
            yield StreamError("connection-failure")
            return
        text = self._resolve(req)
        for token in tokenize(text):
            if self.inter_token_delay > 0:
                await asyncio.sleep(self.inter_token_delay)
            yield Token(token)
        yield Done()

    async def complete(self, req: ChatRequest) -> str:
        if self.fail:
            raise ConnectionError("mock backend configured to fail")
        return self._resolve(req)


def option_following_script(statement: str = "Let me think this through.") -> Callable[[ChatRequest], str]:
    """A script that obeys the prompt it is given: it echoes the first entry of
    the 'Valid actions:' line, which is how a cooperative model would reply."""

    def _reply(req: ChatRequest) -> str:
        prompt = "\n".join(m.get("content", "") for m in req.messages)
        match = re.search(r"Valid actions: ([^\n|]+)", prompt)
        if match:
            return f"{statement}\nACTION: {match.group(1).strip()}"
        return statement

    return _reply
