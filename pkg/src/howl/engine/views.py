"""Role-filtered projections of the game state.

A view is the only game data an agent, prompt, or client may ever receive;
each role-conditional field exists exactly for the role entitled to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .state import GameState
from .types import KillRecord, Phase, Role, WitchRecord
from ..events import payload_to_json, phase_to_json


@dataclass
class PlayerView:
    self_id: int
    self_name: str
    self_role: Role
    round: int
    phase: Phase
    active_players: list[tuple[int, str]]
    roster: list[tuple[int, str, str]]  # (id, name, status) — public information
    public_log: list = field(default_factory=list)
    # werewolves only
    fellow_werewolves: list[tuple[int, str]] | None = None
    werewolf_log: list[KillRecord] | None = None
    # seer only
    seer_knowledge: dict[int, Role] | None = None
    # witch only
    witch_log: list[WitchRecord] | None = None
    num_cure: int | None = None
    num_poison: int | None = None
    pending_kill: int | None = None

    def name_of(self, player_id: int) -> str:
        for pid, name, _status in self.roster:
            if pid == player_id:
                return name
        return f"#{player_id}"

    def is_active(self, player_id: int) -> bool:
        return any(pid == player_id for pid, _ in self.active_players)


def view_for(state: GameState, player_id: int) -> PlayerView:
    p = state.player(player_id)
    view = PlayerView(
        self_id=p.id,
        self_name=p.name,
        self_role=p.role,
        round=state.round,
        phase=state.phase,
        active_players=[(q.id, q.name) for q in state.active_players()],
        roster=[(q.id, q.name, q.status.value) for q in state.players],
        public_log=list(state.public_log),
    )
    if p.role is Role.WEREWOLF:
        view.fellow_werewolves = [
            (q.id, q.name)
            for q in state.players
            if q.role is Role.WEREWOLF and q.id != p.id
        ]
        view.werewolf_log = list(state.werewolf_log)
    elif p.role is Role.SEER:
        view.seer_knowledge = dict(state.seer_knowledge)
    elif p.role is Role.WITCH:
        view.witch_log = list(state.witch_log)
        view.num_cure = state.num_cure
        view.num_poison = state.num_poison
        if state.phase.is_night:
            view.pending_kill = state.pending_night.chosen_kill
    return view


def view_to_json(view: PlayerView) -> dict:
    """Serialized view; role-conditional keys are present only when entitled."""
    out = {
        "self_id": view.self_id,
        "self_name": view.self_name,
        "self_role": view.self_role.value,
        "round": view.round,
        "phase": phase_to_json(view.phase),
        "active_players": [{"id": i, "name": n} for i, n in view.active_players],
        "roster": [
            {"id": i, "name": n, "status": s} for i, n, s in view.roster
        ],
        "log": [payload_to_json(p) for p in view.public_log],
    }
    if view.fellow_werewolves is not None:
        out["fellow_werewolves"] = [
            {"id": i, "name": n} for i, n in view.fellow_werewolves
        ]
    if view.werewolf_log is not None:
        out["werewolf_log"] = [
            {"round": r.round, "target": r.target} for r in view.werewolf_log
        ]
    if view.seer_knowledge is not None:
        out["seer_dict"] = {str(k): v.value for k, v in view.seer_knowledge.items()}
    if view.witch_log is not None:
        out["witch_log"] = [
            {
                "round": r.round,
                "cured": r.cured,
                "cure_target": r.cure_target,
                "poison_target": r.poison_target,
            }
            for r in view.witch_log
        ]
    if view.num_cure is not None:
        out["num_cure"] = view.num_cure
    if view.num_poison is not None:
        out["num_poison"] = view.num_poison
    if view.pending_kill is not None:
        out["pending_kill"] = view.pending_kill
    return out
