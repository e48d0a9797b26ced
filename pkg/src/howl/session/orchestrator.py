"""Session orchestration: the authoritative game loop.

One orchestrator owns one GameState. Agent elicitations and speech pipelining
run concurrently around it, but every state mutation passes through here
sequentially: nights run werewolves and seer in parallel, then the witch
(who must see the arbitrated kill), then resolution; days run one speaker at
a time, streaming statement text chunk-wise into the speech pipeline while
the next elicitation proceeds; votes are collected in seat order.
"""

from __future__ import annotations

import asyncio
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .record import IncrementalWriter, SessionRecord
from .router import FrameRouter, NullRouter
from ..agents import (
    AgentBackend,
    AgentBinding,
    AliasMap,
    ElicitResult,
    HumanAgent,
    LlmAgent,
    PromptContext,
    ReplySource,
    ScriptedAgent,
    Task,
    elicit,
    format_instructions_for,
)
from ..engine import (
    DayStage,
    GameConfig,
    GameState,
    PlayerState,
    Role,
    Statement,
    action_label,
    legal_actions,
    new_game,
    process_voting,
    record_statement,
    resolve_night,
    state_digest,
    submit_night_action,
    view_for,
)
from ..events import (
    ActionRequest,
    Degradation,
    Emission,
    Fallback,
    PUBLIC,
    RoleAssignment,
    SYSTEM,
    SessionEvent,
    StatementChunk,
    private,
)
from ..gateway import ChatClient
from ..speech import SentenceChunk, SpeechScheduler, VoiceRegistry, default_registry, segment


class Clock(Protocol):
    def now(self) -> float: ...


class SystemClock:
    """Seconds since session start, wall time."""

    def __init__(self) -> None:
        self._t0 = time.monotonic()

    def now(self) -> float:
        return time.monotonic() - self._t0


class LogicalClock:
    """Deterministic event time: one tick per stamp."""

    def __init__(self) -> None:
        self._t = -1.0

    def now(self) -> float:
        self._t += 1.0
        return self._t


@dataclass
class SessionSettings:
    retry_budget: int = 2
    human_deadline_s: float = 120.0
    history_char_budget: int = 4000
    min_chunk_chars: int = 24
    default_model: str = "default"


async def _queue_stream(queue: asyncio.Queue):
    while True:
        item = await queue.get()
        if item is None:
            return
        yield item


class Orchestrator:
    def __init__(
        self,
        config: GameConfig,
        bindings: list[AgentBinding],
        *,
        chat_client: ChatClient | None = None,
        scheduler: SpeechScheduler | None = None,
        voices: VoiceRegistry | None = None,
        human_bridges: dict[int, ReplySource] | None = None,
        clock: Clock | None = None,
        router: FrameRouter | None = None,
        record_path: str | Path | None = None,
        settings: SessionSettings | None = None,
    ):
        config.validate()
        by_player = {b.player: b for b in bindings}
        if sorted(by_player) != list(range(len(config.player_names))):
            raise ValueError("bindings must cover every player exactly once")
        self.config = config
        self.bindings = [by_player[i] for i in range(len(config.player_names))]
        self.settings = settings or SessionSettings()
        self.clock = clock or SystemClock()
        self.router = router or NullRouter()
        self.scheduler = scheduler
        self.voices = voices or default_registry()
        self._chat_client = chat_client
        self._human_bridges = human_bridges or {}
        self._writer = (
            IncrementalWriter(record_path, config, self.bindings)
            if record_path
            else None
        )
        if scheduler is not None and scheduler.on_degradation is None:
            scheduler.on_degradation = self._on_degradation
        self.events: list[SessionEvent] = []
        self.state: GameState = new_game(config)
        self._backends = {b.player: self._build_backend(b) for b in self.bindings}
        self._speech_tasks: list[asyncio.Task] = []
        # voices bind at session start; unknown personas resolve to the default
        self._voice_of = {
            p.id: self.voices.for_persona(by_player[p.id].persona or p.name)
            for p in self.state.players
        }

    # -- wiring -----------------------------------------------------------

    def _build_backend(self, binding: AgentBinding) -> AgentBackend:
        if binding.kind == "scripted":
            return ScriptedAgent(
                binding.policy, seed=self.config.rng_seed, player=binding.player
            )
        if binding.kind == "llm":
            if self._chat_client is None:
                raise ValueError("llm binding requires a chat client")
            return LlmAgent(
                self._chat_client,
                binding.model or self.settings.default_model,
                temperature=binding.temperature,
            )
        if binding.kind == "human":
            bridge = self._human_bridges.get(binding.player)
            if bridge is None:
                raise ValueError(f"no bridge for human player {binding.player}")
            return HumanAgent(bridge, self.settings.human_deadline_s)
        raise ValueError(f"unknown binding kind '{binding.kind}'")

    def _alias_for(self, player: int) -> AliasMap:
        # aliases shield models from real persona names; humans see real names
        enabled = (
            self.config.neutral_aliases and self.bindings[player].kind != "human"
        )
        return AliasMap.for_players(
            [(p.id, p.name) for p in self.state.players], enabled=enabled
        )

    def _emit(self, visibility, payload) -> SessionEvent:
        event = SessionEvent(len(self.events), self.clock.now(), visibility, payload)
        self.events.append(event)
        self.router.deliver(event)
        if self._writer:
            self._writer.event(event)
        return event

    def _commit(self, state: GameState, emissions: list[Emission]) -> None:
        self.state = state
        for visibility, payload in emissions:
            self._emit(visibility, payload)

    def _on_degradation(self, utterance: int, index: int, reason: str) -> None:
        self._emit(SYSTEM, Degradation(utterance, index, reason))

    # -- elicitation ------------------------------------------------------

    def _context(self, player: int, task: Task) -> tuple[PromptContext, tuple[str, ...]]:
        alias = self._alias_for(player)
        options = tuple(
            sorted(
                action_label(a, alias.label)
                for a in legal_actions(self.state, player)
                if not isinstance(a, Statement)
            )
        )
        ctx = PromptContext(
            view=view_for(self.state, player),
            task=task,
            alias_map=alias,
            format_instructions=format_instructions_for(task, options),
            history_char_budget=self.settings.history_char_budget,
        )
        return ctx, options

    def _request_action(self, ctx: PromptContext, options: tuple[str, ...]) -> None:
        player = ctx.view.self_id
        deadline = (
            self.settings.human_deadline_s
            if self.bindings[player].kind == "human"
            else None
        )
        note = None
        if ctx.view.pending_kill is not None:
            note = (
                "The werewolves intend to eliminate "
                f"{ctx.alias_map.label(ctx.view.pending_kill)} tonight."
            )
        self._emit(
            private(player),
            ActionRequest(
                player=player,
                task=ctx.task.value,
                options=options,
                deadline_s=deadline,
                note=note,
            ),
        )

    def _fallback_rng(self, player: int, task: Task) -> random.Random:
        return random.Random(
            f"{self.config.rng_seed}:fallback:{player}:{self.state.round}:{task.value}"
        )

    async def _elicit(
        self, player: int, ctx: PromptContext, *, on_token=None
    ) -> ElicitResult:
        result = await elicit(
            self._backends[player],
            ctx,
            self.settings.retry_budget,
            on_token=on_token,
            fallback_rng=self._fallback_rng(player, ctx.task),
        )
        if result.fallback:
            label = (
                action_label(result.reply.action, ctx.alias_map.label)
                if result.reply.action is not None
                else None
            )
            self._emit(
                SYSTEM,
                Fallback(
                    player=player,
                    task=ctx.task.value,
                    reason=result.failure or "unparseable-reply",
                    action=label,
                ),
            )
        return result

    # -- phases -----------------------------------------------------------

    async def _night(self) -> None:
        state = self.state
        wolves = state.actives_with_role(Role.WEREWOLF)
        seers = state.actives_with_role(Role.SEER)
        witches = state.actives_with_role(Role.WITCH)

        # werewolves and seer may think in parallel; submissions land in seat order
        first_wave: list[PlayerState] = sorted(wolves + seers, key=lambda p: p.id)
        contexts = {}
        for p in first_wave:
            ctx, options = self._context(p.id, Task.NIGHT_ACTION)
            contexts[p.id] = ctx
            self._request_action(ctx, options)
        results = await asyncio.gather(
            *(self._elicit(p.id, contexts[p.id]) for p in first_wave)
        )
        for p, result in zip(first_wave, results):
            if result.reply.action is not None:
                self.state = submit_night_action(self.state, p.id, result.reply.action)

        for witch in witches:  # zero or one; sees the arbitrated kill target
            ctx, options = self._context(witch.id, Task.NIGHT_ACTION)
            self._request_action(ctx, options)
            result = await self._elicit(witch.id, ctx)
            if result.reply.action is not None:
                self.state = submit_night_action(
                    self.state, witch.id, result.reply.action
                )

        state, emissions = resolve_night(self.state)
        self._commit(state, emissions)

    async def _discussion(self) -> None:
        while self.state.phase.is_day(DayStage.DISCUSSION):
            speaker = self.state.speak_queue[0]
            ctx, options = self._context(speaker, Task.DISCUSS)
            self._request_action(ctx, options)
            await self._speak_statement(speaker, ctx)

    async def _speak_statement(self, speaker: int, ctx: PromptContext) -> None:
        """Elicit one statement, streaming its text through segmentation into
        chunk events and (when speech is on) the synthesis/playback pipeline.
        Playback continues in the background while the game moves on."""
        alias = ctx.alias_map
        utterance = self.state.next_utterance
        token_queue: asyncio.Queue = asyncio.Queue()
        chunk_queue: asyncio.Queue | None = (
            asyncio.Queue() if self.scheduler is not None else None
        )
        loop = asyncio.get_running_loop()
        started_at = loop.time()

        async def pump() -> None:
            try:
                async for chunk in segment(
                    _queue_stream(token_queue),
                    utterance=utterance,
                    min_chunk_chars=self.settings.min_chunk_chars,
                ):
                    # outward text is de-aliased; labels never span chunks
                    spoken = alias.strip(chunk.text)
                    self._emit(
                        PUBLIC,
                        StatementChunk(speaker, chunk.utterance, chunk.index, spoken),
                    )
                    if chunk_queue is not None:
                        await chunk_queue.put(
                            SentenceChunk(
                                chunk.utterance, chunk.index, spoken, chunk.is_final
                            )
                        )
            finally:
                if chunk_queue is not None:
                    await chunk_queue.put(None)

        pump_task = asyncio.create_task(pump())
        speak_task = None
        if self.scheduler is not None:
            handle = self.scheduler.new_utterance(speaker, self._voice_of[speaker])
            speak_task = asyncio.create_task(
                self.scheduler.speak(
                    handle,
                    _queue_stream(chunk_queue),
                    stream_started_at=started_at,
                )
            )
        try:
            result = await self._elicit(speaker, ctx, on_token=token_queue.put)
        finally:
            await token_queue.put(None)
            await pump_task
        statement = alias.strip(result.reply.statement_text)
        state, emissions = record_statement(self.state, speaker, statement)
        self._commit(state, emissions)
        if speak_task is not None:
            self._speech_tasks.append(speak_task)
            self._reap_speech_tasks()

    def _reap_speech_tasks(self) -> None:
        still_running = []
        for task in self._speech_tasks:
            if task.done():
                task.result()  # surface unexpected pipeline errors
            else:
                still_running.append(task)
        self._speech_tasks = still_running

    async def _vote(self) -> None:
        votes: dict[int, int] = {}
        for p in self.state.active_players():
            ctx, options = self._context(p.id, Task.VOTE)
            self._request_action(ctx, options)
            result = await self._elicit(p.id, ctx)
            votes[p.id] = result.reply.action.target
        state, _tally, emissions = process_voting(self.state, votes)
        self._commit(state, emissions)

    # -- the loop ----------------------------------------------------------

    async def run(self) -> SessionRecord:
        # no opening PhaseChange: clients learn the starting phase from their
        # join snapshot, and the wire's Public stream stays payload-for-payload
        # equal to the engine log (statement chunks aside)
        for p in self.state.players:
            fellows = ()
            if p.role is Role.WEREWOLF:
                fellows = tuple(
                    q.id
                    for q in self.state.players
                    if q.role is Role.WEREWOLF and q.id != p.id
                )
            self._emit(private(p.id), RoleAssignment(p.id, p.role, fellows))
        while self.state.game_status:
            await self._night()
            if not self.state.game_status:
                break
            await self._discussion()
            await self._vote()
        if self._speech_tasks:
            await asyncio.gather(*self._speech_tasks)
        digest = state_digest(self.state)
        record = SessionRecord(self.config, self.bindings, self.events, digest)
        if self._writer:
            self._writer.close(digest)
        return record


async def run_session(
    config: GameConfig, bindings: list[AgentBinding], **kwargs
) -> SessionRecord:
    """Build an orchestrator and drive the session to its outcome."""
    return await Orchestrator(config, bindings, **kwargs).run()
