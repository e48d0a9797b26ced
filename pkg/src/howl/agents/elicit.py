"""Driving an agent backend to a validated reply, with retries and fallback."""

from __future__ import annotations

import asyncio
import inspect
import random
from dataclasses import dataclass
from typing import AsyncIterator, Protocol

from .parser import ParsedReply, ParseFailure, parse_reply, view_legal_actions
from .policies import POLICIES
from .prompts import PromptContext, Task, build_prompt
from ..engine import Statement, action_label
from ..gateway import ChatClient, ChatRequest, Done, StreamError, Token

FALLBACK_STATEMENT = "I have nothing to add right now."


@dataclass
class AgentBinding:
    """Who controls a seat; fixed for the whole game."""

    player: int
    kind: str  # "llm" | "scripted" | "human"
    persona: str | None = None
    model: str | None = None
    temperature: float = 0.7
    policy: str = "random-seeded"

    def to_json(self) -> dict:
        out = {"player": self.player, "kind": self.kind}
        if self.persona:
            out["persona"] = self.persona
        if self.kind == "llm":
            out["model"] = self.model
            out["temperature"] = self.temperature
        if self.kind == "scripted":
            out["policy"] = self.policy
        return out

    @staticmethod
    def from_json(d: dict) -> "AgentBinding":
        return AgentBinding(
            player=d["player"],
            kind=d["kind"],
            persona=d.get("persona"),
            model=d.get("model"),
            temperature=d.get("temperature", 0.7),
            policy=d.get("policy", "random-seeded"),
        )


class AgentBackend(Protocol):
    def stream_reply(
        self, ctx: PromptContext, messages: list[dict[str, str]]
    ) -> AsyncIterator[str]: ...


class BackendUnreachable(Exception):
    pass


class LlmAgent:
    def __init__(self, client: ChatClient, model: str,
                 temperature: float = 0.7, max_tokens: int = 512):
        self.client = client
        self.model = model
        self.temperature = temperature
        self.max_tokens = max_tokens

    async def stream_reply(self, ctx, messages):
        req = ChatRequest(
            messages=messages,
            model=self.model,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
        )
        async for event in self.client.stream_chat(req):
            if isinstance(event, Token):
                yield event.text
            elif isinstance(event, StreamError):
                raise BackendUnreachable(event.cause)
            elif isinstance(event, Done):
                return


class ScriptedAgent:
    """Deterministic built-in policy; replies depend only on (seed, ctx)."""

    def __init__(self, policy: str, seed: int, player: int):
        if policy not in POLICIES:
            raise ValueError(f"unknown policy '{policy}'")
        self._policy = POLICIES[policy]
        self.policy = policy
        self.seed = seed
        self.player = player

    def _rng(self, ctx: PromptContext) -> random.Random:
        phase = ctx.view.phase
        key = f"{self.seed}:{self.player}:{ctx.view.round}:{phase.kind.value}:{ctx.task.value}"
        return random.Random(key)

    async def stream_reply(self, ctx, messages):
        yield self._policy(ctx, self._rng(ctx))


class ReplySource(Protocol):
    """Bridge to a human seat; `request` resolves to raw reply text."""

    async def request(self, ctx: PromptContext, deadline_s: float | None) -> str: ...


class HumanAgent:
    def __init__(self, bridge: ReplySource, deadline_s: float | None = 120.0):
        self.bridge = bridge
        self.deadline_s = deadline_s

    async def stream_reply(self, ctx, messages):
        yield await self.bridge.request(ctx, self.deadline_s)


@dataclass
class ElicitResult:
    reply: ParsedReply
    fallback: bool = False
    attempts: int = 1
    failure: str | None = None


async def _forward(on_token, text: str) -> None:
    if on_token is None:
        return
    result = on_token(text)
    if inspect.isawaitable(result):
        await result


def fallback_action(ctx: PromptContext, rng: random.Random):
    """Seeded-uniform legal action for a stalled seat; None for discussion."""
    acts = sorted(
        (a for a in view_legal_actions(ctx.view) if not isinstance(a, Statement)),
        key=lambda a: action_label(a, str),
    )
    if not acts:
        return None
    return rng.choice(acts)


async def elicit(
    backend: AgentBackend,
    ctx: PromptContext,
    retry_budget: int = 2,
    *,
    on_token=None,
    fallback_rng: random.Random | None = None,
) -> ElicitResult:
    """Query the backend until a reply parses; degrade to a seeded legal action.

    Statement text is forwarded to `on_token` incrementally while the reply is
    still streaming (the speech pipeline consumes it). Discussion replies are
    not re-prompted: a statement can only fail by being empty, and re-asking
    would speak two competing streams.
    """
    attempts_allowed = 1 if ctx.task is Task.DISCUSS else retry_budget + 1
    messages = build_prompt(ctx)
    raw = ""
    failure: str | None = None
    attempts = 0
    for attempt in range(attempts_allowed):
        attempts = attempt + 1
        parts: list[str] = []
        try:
            async for fragment in backend.stream_reply(ctx, messages):
                parts.append(fragment)
                if ctx.task is Task.DISCUSS:
                    await _forward(on_token, fragment)
            raw = "".join(parts)
        except (BackendUnreachable, asyncio.TimeoutError, TimeoutError) as exc:
            failure = f"backend: {exc}"
            break
        try:
            return ElicitResult(
                parse_reply(raw, ctx.task, ctx.view, ctx.alias_map),
                attempts=attempts,
            )
        except ParseFailure as pf:
            failure = pf.kind
            messages = messages + [
                {"role": "assistant", "content": raw},
                {
                    "role": "user",
                    "content": f"Your reply could not be used: {pf.hint}. Answer again.",
                },
            ]

    rng = fallback_rng or random.Random(
        f"fallback:{ctx.view.self_id}:{ctx.view.round}:{ctx.task.value}"
    )
    if ctx.task is Task.DISCUSS:
        await _forward(on_token, FALLBACK_STATEMENT)
        reply = ParsedReply(statement_text=FALLBACK_STATEMENT, action=None, raw=raw)
    else:
        action = fallback_action(ctx, rng)
        reply = ParsedReply(statement_text="", action=action, raw=raw)
    return ElicitResult(reply, fallback=True, attempts=attempts, failure=failure)
