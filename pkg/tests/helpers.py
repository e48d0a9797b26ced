"""Shared builders for engine-level tests."""

from __future__ import annotations

import random
from collections import Counter

from howl.engine import (
    GameConfig,
    GameState,
    Kill,
    Pass,
    Phase,
    PlayerState,
    Reveal,
    Role,
    WitchNight,
    legal_actions,
    new_game,
    process_voting,
    record_statement,
    resolve_night,
    submit_night_action,
)

NAME_POOL = [
    "Avery", "Blair", "Casey", "Drew", "Emery", "Flynn",
    "Gale", "Harper", "Indigo", "Jules", "Kit", "Lane",
]

SIX = [Role.WEREWOLF, Role.WEREWOLF, Role.VILLAGER, Role.VILLAGER, Role.SEER, Role.WITCH]


def make_config(roles: list[Role], *, seed: int = 0, max_rounds: int = 15,
                cures: int = 1, poisons: int = 1, names: list[str] | None = None) -> GameConfig:
    names = names or NAME_POOL[: len(roles)]
    return GameConfig(
        player_names=list(names),
        role_distribution=dict(Counter(roles)),
        max_rounds=max_rounds,
        rng_seed=seed,
        witch_cures=cures,
        witch_poisons=poisons,
    )


def make_state(roles: list[Role], *, seed: int = 0, max_rounds: int = 15,
               cures: int = 1, poisons: int = 1, phase: Phase | None = None,
               names: list[str] | None = None) -> GameState:
    """State with roles pinned by position (bypasses the seeded shuffle)."""
    config = make_config(roles, seed=seed, max_rounds=max_rounds,
                         cures=cures, poisons=poisons, names=names)
    config.validate()
    names = config.player_names
    return GameState(
        config=config,
        players=[PlayerState(i, names[i], roles[i]) for i in range(len(roles))],
        round=1,
        phase=phase or Phase.night(1),
        game_status=True,
        num_cure=cures,
        num_poison=poisons,
    )


def ids_with_role(state: GameState, role: Role) -> list[int]:
    return [p.id for p in state.players if p.role is role]


def run_full_night(state: GameState, *, kills: dict[int, int],
                   reveal: int | None = None, witch: WitchNight | Pass | None = None):
    """Submit a complete night and resolve it."""
    for wolf, target in kills.items():
        state = submit_night_action(state, wolf, Kill(target))
    if reveal is not None:
        seer = ids_with_role(state, Role.SEER)[0]
        state = submit_night_action(state, seer, Reveal(reveal))
    if witch is not None:
        witch_id = ids_with_role(state, Role.WITCH)[0]
        state = submit_night_action(state, witch_id, witch)
    return resolve_night(state)


def random_playthrough(seed: int, *, roles: list[Role] | None = None,
                       max_rounds: int = 8, on_state=None) -> GameState:
    """Drive a whole game with uniformly random legal actions (engine only)."""
    rng = random.Random(f"walk:{seed}")
    state = new_game(make_config(roles or SIX, seed=seed, max_rounds=max_rounds))
    if on_state:
        on_state(state)

    def pick(actions):
        return rng.choice(sorted(actions, key=repr))

    while state.game_status:
        if state.phase.is_night:
            for p in list(state.active_players()):
                acts = legal_actions(state, p.id)
                night_acts = [a for a in acts if not isinstance(a, type(None))]
                if p.role is Role.WEREWOLF:
                    state = submit_night_action(state, p.id, pick(acts))
                elif p.role in (Role.SEER, Role.WITCH) and night_acts:
                    state = submit_night_action(state, p.id, pick(acts))
            state, _ = resolve_night(state)
        elif state.phase.kind.value == "day" and state.phase.stage.value == "discussion":
            speaker = state.speak_queue[0]
            state, _ = record_statement(state, speaker, f"statement by {speaker} r{state.round}")
        elif state.phase.kind.value == "day" and state.phase.stage.value == "voting":
            votes = {}
            for p in state.active_players():
                targets = sorted(a.target for a in legal_actions(state, p.id))
                votes[p.id] = rng.choice(targets)
            state, _, _ = process_voting(state, votes)
        if on_state:
            on_state(state)
    return state
