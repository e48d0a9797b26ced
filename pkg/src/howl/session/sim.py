"""Headless simulation batches: scripted agents, logical time, outcome stats."""

from __future__ import annotations

from dataclasses import replace

from .orchestrator import LogicalClock, SessionSettings, run_session
from .record import SessionRecord
from ..agents import AgentBinding
from ..engine import GameConfig, Winner
from ..events import Outcome
from ..speech import MockTtsBackend, NullSink, SpeechScheduler


def scripted_bindings(config: GameConfig, policy: str = "random-seeded") -> list[AgentBinding]:
    return [
        AgentBinding(player=i, kind="scripted", policy=policy)
        for i in range(len(config.player_names))
    ]


async def run_one(
    config: GameConfig,
    *,
    policy: str = "random-seeded",
    speech: bool = False,
    tts_fail: bool = False,
    record_path=None,
    router=None,
    settings: SessionSettings | None = None,
) -> SessionRecord:
    """One deterministic headless game."""
    scheduler = None
    if speech:
        scheduler = SpeechScheduler(
            MockTtsBackend(fail=tts_fail), NullSink(), workers=2
        )
    return await run_session(
        config,
        scripted_bindings(config, policy),
        clock=LogicalClock(),
        scheduler=scheduler,
        record_path=record_path,
        router=router,
        settings=settings,
    )


def outcome_of(record: SessionRecord):
    for event in reversed(record.events):
        if isinstance(event.payload, Outcome):
            return event.payload.outcome
    return None


async def run_batch(
    config: GameConfig,
    repeats: int,
    *,
    policy: str = "random-seeded",
    speech: bool = False,
) -> dict:
    """Repeat the game over consecutive seeds; returns outcome statistics."""
    wins = {Winner.VILLAGE: 0, Winner.WEREWOLVES: 0, Winner.DRAW: 0}
    rounds: list[int] = []
    fallbacks = 0
    for i in range(repeats):
        cfg = replace(config, rng_seed=config.rng_seed + i)
        record = await run_one(cfg, policy=policy, speech=speech)
        outcome = outcome_of(record)
        wins[outcome.winner] += 1
        rounds.append(outcome.final_round)
        fallbacks += sum(
            1 for e in record.events if type(e.payload).__name__ == "Fallback"
        )
    return {
        "games": repeats,
        "policy": policy,
        "base_seed": config.rng_seed,
        "village_wins": wins[Winner.VILLAGE],
        "werewolf_wins": wins[Winner.WEREWOLVES],
        "draws": wins[Winner.DRAW],
        "avg_rounds": sum(rounds) / len(rounds) if rounds else 0.0,
        "fallback_events": fallbacks,
    }
