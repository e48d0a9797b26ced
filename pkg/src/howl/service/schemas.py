"""Pydantic request/response models for the REST surface."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..engine import GameConfig, Role


class RoleCounts(BaseModel):
    werewolf: int = 2
    villager: int = 2
    seer: int = 1
    witch: int = 1

    def to_distribution(self) -> dict[Role, int]:
        return {
            Role.WEREWOLF: self.werewolf,
            Role.VILLAGER: self.villager,
            Role.SEER: self.seer,
            Role.WITCH: self.witch,
        }


class GameConfigIn(BaseModel):
    player_names: list[str]
    roles: RoleCounts = Field(default_factory=RoleCounts)
    max_rounds: int = 15
    rng_seed: int = 0
    witch_cures: int = 1
    witch_poisons: int = 1
    neutral_aliases: bool = True

    def to_config(self) -> GameConfig:
        return GameConfig(
            player_names=list(self.player_names),
            role_distribution=self.roles.to_distribution(),
            max_rounds=self.max_rounds,
            rng_seed=self.rng_seed,
            witch_cures=self.witch_cures,
            witch_poisons=self.witch_poisons,
            neutral_aliases=self.neutral_aliases,
        )


class BindingIn(BaseModel):
    player: int
    kind: Literal["llm", "scripted", "human"]
    persona: str | None = None
    model: str | None = None
    temperature: float = 0.7
    policy: str = "random-seeded"


class SessionCreate(BaseModel):
    config: GameConfigIn | None = None
    bindings: list[BindingIn] | None = None
    record: bool = False


class RosterEntry(BaseModel):
    id: int
    name: str
    status: str


class SessionCreated(BaseModel):
    session_id: str
    status: str
    human_seats: list[int]
    join_url: str


class SessionInfo(BaseModel):
    session_id: str
    status: str
    round: int
    phase: dict
    roster: list[RosterEntry]
    human_seats: list[int]
    connected: list[int]
    outcome: dict | None = None
    error: str | None = None


class SimRequest(BaseModel):
    config: GameConfigIn | None = None
    repeats: int = Field(default=10, ge=1, le=10_000)
    policy: str = "random-seeded"
    speech: bool = False


class SimResult(BaseModel):
    games: int
    policy: str
    base_seed: int
    village_wins: int
    werewolf_wins: int
    draws: int
    avg_rounds: float
    fallback_events: int


class VoiceInfo(BaseModel):
    voice_id: str
    persona: str
    reference_id: str


class VoicesOut(BaseModel):
    voices: list[VoiceInfo]
    tts_backend: str
    tts_healthy: bool
