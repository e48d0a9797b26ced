"""Session events: the one record shared by the game log, persistence, and the wire.

The engine emits bare payloads; the session layer wraps them in a
:class:`SessionEvent` envelope (seq, logical timestamp, visibility) when they
enter the session log or go over the wire.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .engine.types import (
    DayStage,
    EliminationCause,
    GameOutcome,
    OutcomeReason,
    Phase,
    PhaseKind,
    Role,
    Winner,
)

# --- Visibility ----------------------------------------------------------------


@dataclass(frozen=True)
class Visibility:
    scope: str  # "public" | "private" | "system"
    player: int | None = None

    def admits(self, player: int | None) -> bool:
        """Whether a connection bound to `player` (None = spectator) may see this."""
        if self.scope == "public":
            return True
        if self.scope == "private":
            return player is not None and player == self.player
        return False  # system events are record-keeping only


PUBLIC = Visibility("public")
SYSTEM = Visibility("system")


def private(player: int) -> Visibility:
    return Visibility("private", player)


# --- Payloads ------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseChange:
    phase: Phase


@dataclass(frozen=True)
class StatementChunk:
    player: int
    utterance: int
    index: int
    text: str


@dataclass(frozen=True)
class StatementDone:
    player: int
    utterance: int
    text: str


@dataclass(frozen=True)
class RevealFact:
    target: int
    role: Role


@dataclass(frozen=True)
class NightRecord:
    """Raw night submissions; System visibility only, consumed by replay."""

    werewolf_choices: dict[int, int]
    seer_target: int | None
    seer_submitted: bool
    witch_cure: bool
    witch_poison: int | None
    witch_submitted: bool
    chosen_kill: int | None


@dataclass(frozen=True)
class NightResult:
    round: int
    deaths: tuple[int, ...] = ()
    reveal: RevealFact | None = None
    night_record: NightRecord | None = None


@dataclass(frozen=True)
class VoteResult:
    round: int
    votes: dict[int, int]
    counts: dict[int, int]
    eliminated: int | None
    tie: bool


@dataclass(frozen=True)
class RoleAssignment:
    player: int
    role: Role
    fellow_werewolves: tuple[int, ...] = ()


@dataclass(frozen=True)
class ActionRequest:
    player: int
    task: str  # "discuss" | "vote" | "night_action"
    options: tuple[str, ...] = ()
    deadline_s: float | None = None
    note: str | None = None


@dataclass(frozen=True)
class Fallback:
    player: int
    task: str
    reason: str
    action: str | None = None


@dataclass(frozen=True)
class Degradation:
    utterance: int
    index: int
    reason: str


@dataclass(frozen=True)
class Outcome:
    outcome: GameOutcome


Payload = (
    PhaseChange
    | StatementChunk
    | StatementDone
    | NightResult
    | VoteResult
    | RoleAssignment
    | ActionRequest
    | Fallback
    | Degradation
    | Outcome
)

Emission = tuple[Visibility, Any]  # what engine ops hand back to the session layer


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    timestamp: float
    visibility: Visibility
    payload: Any


# --- JSON codec -----------------------------------------------------------------

_PAYLOAD_TAGS = {
    PhaseChange: "phase_change",
    StatementChunk: "statement_chunk",
    StatementDone: "statement_done",
    NightResult: "night_result",
    VoteResult: "vote_result",
    RoleAssignment: "role_assignment",
    ActionRequest: "action_request",
    Fallback: "fallback",
    Degradation: "degradation",
    Outcome: "outcome",
}
_TAG_CLASSES = {tag: cls for cls, tag in _PAYLOAD_TAGS.items()}


def phase_to_json(phase: Phase) -> dict:
    out: dict[str, Any] = {"kind": phase.kind.value, "round": phase.round}
    if phase.stage is not None:
        out["stage"] = phase.stage.value
    return out


def phase_from_json(d: dict) -> Phase:
    stage = DayStage(d["stage"]) if d.get("stage") else None
    return Phase(PhaseKind(d["kind"]), d["round"], stage)


def outcome_to_json(o: GameOutcome) -> dict:
    return {
        "winner": o.winner.value,
        "reason": o.reason.value,
        "final_round": o.final_round,
    }


def outcome_from_json(d: dict) -> GameOutcome:
    return GameOutcome(Winner(d["winner"]), OutcomeReason(d["reason"]), d["final_round"])


def payload_to_json(p: Any) -> dict:
    tag = _PAYLOAD_TAGS[type(p)]
    out: dict[str, Any] = {"type": tag}
    if isinstance(p, PhaseChange):
        out["phase"] = phase_to_json(p.phase)
    elif isinstance(p, StatementChunk):
        out.update(player=p.player, utterance=p.utterance, index=p.index, text=p.text)
    elif isinstance(p, StatementDone):
        out.update(player=p.player, utterance=p.utterance, text=p.text)
    elif isinstance(p, NightResult):
        out["round"] = p.round
        out["deaths"] = list(p.deaths)
        if p.reveal is not None:
            out["reveal"] = {"target": p.reveal.target, "role": p.reveal.role.value}
        if p.night_record is not None:
            r = p.night_record
            out["night_record"] = {
                "werewolf_choices": {str(k): v for k, v in r.werewolf_choices.items()},
                "seer_target": r.seer_target,
                "seer_submitted": r.seer_submitted,
                "witch_cure": r.witch_cure,
                "witch_poison": r.witch_poison,
                "witch_submitted": r.witch_submitted,
                "chosen_kill": r.chosen_kill,
            }
    elif isinstance(p, VoteResult):
        out.update(
            round=p.round,
            votes={str(k): v for k, v in p.votes.items()},
            counts={str(k): v for k, v in p.counts.items()},
            eliminated=p.eliminated,
            tie=p.tie,
        )
    elif isinstance(p, RoleAssignment):
        out.update(player=p.player, role=p.role.value)
        if p.fellow_werewolves:
            out["fellow_werewolves"] = list(p.fellow_werewolves)
    elif isinstance(p, ActionRequest):
        out.update(player=p.player, task=p.task, options=list(p.options))
        if p.deadline_s is not None:
            out["deadline_s"] = p.deadline_s
        if p.note is not None:
            out["note"] = p.note
    elif isinstance(p, Fallback):
        out.update(player=p.player, task=p.task, reason=p.reason)
        if p.action is not None:
            out["action"] = p.action
    elif isinstance(p, Degradation):
        out.update(utterance=p.utterance, index=p.index, reason=p.reason)
    elif isinstance(p, Outcome):
        out["outcome"] = outcome_to_json(p.outcome)
    else:
        raise TypeError(f"unserializable payload: {p!r}")
    return out


def payload_from_json(d: dict) -> Any:
    cls = _TAG_CLASSES[d["type"]]
    if cls is PhaseChange:
        return PhaseChange(phase_from_json(d["phase"]))
    if cls is StatementChunk:
        return StatementChunk(d["player"], d["utterance"], d["index"], d["text"])
    if cls is StatementDone:
        return StatementDone(d["player"], d["utterance"], d["text"])
    if cls is NightResult:
        reveal = None
        if d.get("reveal"):
            reveal = RevealFact(d["reveal"]["target"], Role(d["reveal"]["role"]))
        record = None
        if d.get("night_record"):
            r = d["night_record"]
            record = NightRecord(
                werewolf_choices={int(k): v for k, v in r["werewolf_choices"].items()},
                seer_target=r["seer_target"],
                seer_submitted=r["seer_submitted"],
                witch_cure=r["witch_cure"],
                witch_poison=r["witch_poison"],
                witch_submitted=r["witch_submitted"],
                chosen_kill=r["chosen_kill"],
            )
        return NightResult(d["round"], tuple(d.get("deaths", ())), reveal, record)
    if cls is VoteResult:
        return VoteResult(
            d["round"],
            {int(k): v for k, v in d["votes"].items()},
            {int(k): v for k, v in d["counts"].items()},
            d["eliminated"],
            d["tie"],
        )
    if cls is RoleAssignment:
        return RoleAssignment(
            d["player"], Role(d["role"]), tuple(d.get("fellow_werewolves", ()))
        )
    if cls is ActionRequest:
        return ActionRequest(
            d["player"],
            d["task"],
            tuple(d.get("options", ())),
            d.get("deadline_s"),
            d.get("note"),
        )
    if cls is Fallback:
        return Fallback(d["player"], d["task"], d["reason"], d.get("action"))
    if cls is Degradation:
        return Degradation(d["utterance"], d["index"], d["reason"])
    if cls is Outcome:
        return Outcome(outcome_from_json(d["outcome"]))
    raise TypeError(f"unknown payload type: {d.get('type')!r}")


def visibility_to_json(v: Visibility) -> Any:
    if v.scope == "private":
        return ["private", v.player]
    return v.scope


def visibility_from_json(v: Any) -> Visibility:
    if isinstance(v, list):
        return Visibility(v[0], v[1])
    return Visibility(v)


def event_to_json(ev: SessionEvent) -> dict:
    return {
        "seq": ev.seq,
        "t": ev.timestamp,
        "visibility": visibility_to_json(ev.visibility),
        "payload": payload_to_json(ev.payload),
    }


def event_from_json(d: dict) -> SessionEvent:
    return SessionEvent(
        seq=d["seq"],
        timestamp=d["t"],
        visibility=visibility_from_json(d["visibility"]),
        payload=payload_from_json(d["payload"]),
    )
