"""Authoritative game state, construction, and its stable JSON form."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from .errors import UnknownPlayer
from .types import (
    EliminationCause,
    GameConfig,
    GameOutcome,
    KillRecord,
    Phase,
    PlayerState,
    PlayerStatus,
    Role,
    WitchNight,
    WitchRecord,
)
from ..events import (
    outcome_from_json,
    outcome_to_json,
    payload_from_json,
    payload_to_json,
    phase_from_json,
    phase_to_json,
)


@dataclass
class PendingNight:
    """Night submissions collected so far; cleared after each resolution."""

    werewolf_choices: dict[int, int] = field(default_factory=dict)
    seer_target: int | None = None
    witch_action: WitchNight | None = None
    chosen_kill: int | None = None
    submitted: set[int] = field(default_factory=set)


@dataclass
class GameState:
    config: GameConfig
    players: list[PlayerState]
    round: int
    phase: Phase
    game_status: bool
    num_cure: int
    num_poison: int
    public_log: list = field(default_factory=list)  # event payloads, append-only
    werewolf_log: list[KillRecord] = field(default_factory=list)
    witch_log: list[WitchRecord] = field(default_factory=list)
    seer_knowledge: dict[int, Role] = field(default_factory=dict)
    pending_night: PendingNight = field(default_factory=PendingNight)
    speak_queue: list[int] = field(default_factory=list)
    next_utterance: int = 0
    rng_draws: int = 0
    outcome: GameOutcome | None = None

    # -- lookups ---------------------------------------------------------

    def player(self, player_id: int) -> PlayerState:
        if 0 <= player_id < len(self.players):
            return self.players[player_id]
        raise UnknownPlayer(f"no player with id {player_id}")

    def active_players(self) -> list[PlayerState]:
        return [p for p in self.players if p.is_active]

    def actives_with_role(self, role: Role) -> list[PlayerState]:
        return [p for p in self.players if p.is_active and p.role is role]

    def rng(self) -> random.Random:
        """Next deterministic draw; each call advances the serialized counter."""
        r = random.Random(f"{self.config.rng_seed}:{self.rng_draws}")
        self.rng_draws += 1
        return r


def clone_state(state: GameState) -> GameState:
    """Fast structural copy. Log payloads and records are frozen and shared;
    the config is treated as immutable after validation and shared too."""
    return GameState(
        config=state.config,
        players=[
            PlayerState(p.id, p.name, p.role, p.status, p.elimination_cause)
            for p in state.players
        ],
        round=state.round,
        phase=state.phase,
        game_status=state.game_status,
        num_cure=state.num_cure,
        num_poison=state.num_poison,
        public_log=list(state.public_log),
        werewolf_log=list(state.werewolf_log),
        witch_log=list(state.witch_log),
        seer_knowledge=dict(state.seer_knowledge),
        pending_night=PendingNight(
            werewolf_choices=dict(state.pending_night.werewolf_choices),
            seer_target=state.pending_night.seer_target,
            witch_action=state.pending_night.witch_action,
            chosen_kill=state.pending_night.chosen_kill,
            submitted=set(state.pending_night.submitted),
        ),
        speak_queue=list(state.speak_queue),
        next_utterance=state.next_utterance,
        rng_draws=state.rng_draws,
        outcome=state.outcome,
    )


def new_game(config: GameConfig) -> GameState:
    """Build the initial state: seeded role shuffle, Night 1, props from config."""
    config.validate()
    roles: list[Role] = []
    for role in Role:
        roles.extend([role] * config.role_distribution.get(role, 0))
    state = GameState(
        config=config,
        players=[],
        round=1,
        phase=Phase.night(1),
        game_status=True,
        num_cure=config.witch_cures,
        num_poison=config.witch_poisons,
    )
    state.rng().shuffle(roles)
    state.players = [
        PlayerState(id=i, name=name, role=roles[i])
        for i, name in enumerate(config.player_names)
    ]
    return state


# --- Serialization -----------------------------------------------------------


def config_to_json(config: GameConfig) -> dict:
    return {
        "player_names": list(config.player_names),
        "role_distribution": {
            role.value: config.role_distribution.get(role, 0) for role in Role
        },
        "max_rounds": config.max_rounds,
        "rng_seed": config.rng_seed,
        "witch_cures": config.witch_cures,
        "witch_poisons": config.witch_poisons,
        "neutral_aliases": config.neutral_aliases,
    }


def config_from_json(d: dict) -> GameConfig:
    return GameConfig(
        player_names=list(d["player_names"]),
        role_distribution={Role(k): v for k, v in d["role_distribution"].items()},
        max_rounds=d.get("max_rounds", 15),
        rng_seed=d.get("rng_seed", 0),
        witch_cures=d.get("witch_cures", 1),
        witch_poisons=d.get("witch_poisons", 1),
        neutral_aliases=d.get("neutral_aliases", True),
    )


def state_to_json(state: GameState) -> dict:
    """Stable JSON shape; field names match the serialized log contract."""
    return {
        "config": config_to_json(state.config),
        "players": [
            {
                "id": p.id,
                "name": p.name,
                "role": p.role.value,
                "status": p.status.value,
                "elimination_cause": (
                    p.elimination_cause.value if p.elimination_cause else None
                ),
            }
            for p in state.players
        ],
        "round": state.round,
        "phase": phase_to_json(state.phase),
        "game_status": state.game_status,
        "num_cure": state.num_cure,
        "num_poison": state.num_poison,
        "log": [payload_to_json(p) for p in state.public_log],
        "werewolf_log": [{"round": r.round, "target": r.target} for r in state.werewolf_log],
        "witch_log": [
            {
                "round": r.round,
                "cured": r.cured,
                "cure_target": r.cure_target,
                "poison_target": r.poison_target,
            }
            for r in state.witch_log
        ],
        "seer_dict": {str(k): v.value for k, v in state.seer_knowledge.items()},
        "pending_night": {
            "werewolf_choices": {
                str(k): v for k, v in state.pending_night.werewolf_choices.items()
            },
            "seer_target": state.pending_night.seer_target,
            "witch_action": (
                {
                    "cure": state.pending_night.witch_action.cure,
                    "poison_target": state.pending_night.witch_action.poison_target,
                }
                if state.pending_night.witch_action
                else None
            ),
            "chosen_kill": state.pending_night.chosen_kill,
            "submitted": sorted(state.pending_night.submitted),
        },
        "speak_queue": list(state.speak_queue),
        "next_utterance": state.next_utterance,
        "rng_draws": state.rng_draws,
        "outcome": outcome_to_json(state.outcome) if state.outcome else None,
    }


def state_from_json(d: dict) -> GameState:
    pn = d["pending_night"]
    return GameState(
        config=config_from_json(d["config"]),
        players=[
            PlayerState(
                id=p["id"],
                name=p["name"],
                role=Role(p["role"]),
                status=PlayerStatus(p["status"]),
                elimination_cause=(
                    EliminationCause(p["elimination_cause"])
                    if p["elimination_cause"]
                    else None
                ),
            )
            for p in d["players"]
        ],
        round=d["round"],
        phase=phase_from_json(d["phase"]),
        game_status=d["game_status"],
        num_cure=d["num_cure"],
        num_poison=d["num_poison"],
        public_log=[payload_from_json(p) for p in d["log"]],
        werewolf_log=[KillRecord(r["round"], r["target"]) for r in d["werewolf_log"]],
        witch_log=[
            WitchRecord(r["round"], r["cured"], r["cure_target"], r["poison_target"])
            for r in d["witch_log"]
        ],
        seer_knowledge={int(k): Role(v) for k, v in d["seer_dict"].items()},
        pending_night=PendingNight(
            werewolf_choices={int(k): v for k, v in pn["werewolf_choices"].items()},
            seer_target=pn["seer_target"],
            witch_action=(
                WitchNight(pn["witch_action"]["cure"], pn["witch_action"]["poison_target"])
                if pn["witch_action"]
                else None
            ),
            chosen_kill=pn["chosen_kill"],
            submitted=set(pn["submitted"]),
        ),
        speak_queue=list(d["speak_queue"]),
        next_utterance=d["next_utterance"],
        rng_draws=d["rng_draws"],
        outcome=outcome_from_json(d["outcome"]) if d["outcome"] else None,
    )


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def state_digest(state: GameState) -> str:
    raw = canonical_json(state_to_json(state)).encode("utf-8")
    return "sha256:" + hashlib.sha256(raw).hexdigest()
