"""Session records: append-only JSONL persistence and replay through the engine.

A record holds the config, the seat bindings, every SessionEvent, and the
final state digest; replaying the events through the rules engine must
reproduce that digest exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..agents import AgentBinding
from ..engine import (
    GameConfig,
    GameState,
    Kill,
    Pass,
    Reveal,
    Role,
    WitchNight,
    config_from_json,
    config_to_json,
    new_game,
    process_voting,
    record_statement,
    resolve_night,
    state_digest,
    submit_night_action,
)
from ..events import (
    NightResult,
    SessionEvent,
    StatementDone,
    VoteResult,
    event_from_json,
    event_to_json,
)

RECORD_VERSION = 1


@dataclass
class SessionRecord:
    config: GameConfig
    bindings: list[AgentBinding]
    events: list[SessionEvent] = field(default_factory=list)
    final_digest: str = ""
    version: int = RECORD_VERSION

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "config": config_to_json(self.config),
            "bindings": [b.to_json() for b in self.bindings],
            "events": [event_to_json(e) for e in self.events],
            "final_digest": self.final_digest,
        }

    @staticmethod
    def from_json(d: dict) -> "SessionRecord":
        return SessionRecord(
            config=config_from_json(d["config"]),
            bindings=[AgentBinding.from_json(b) for b in d["bindings"]],
            events=[event_from_json(e) for e in d["events"]],
            final_digest=d["final_digest"],
            version=d.get("version", RECORD_VERSION),
        )


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=True)


def write_jsonl(record: SessionRecord, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(_dump({
            "kind": "meta",
            "version": record.version,
            "config": config_to_json(record.config),
            "bindings": [b.to_json() for b in record.bindings],
        }) + "\n")
        for event in record.events:
            fh.write(_dump({"kind": "event", "event": event_to_json(event)}) + "\n")
        fh.write(_dump({"kind": "final", "digest": record.final_digest}) + "\n")


def read_jsonl(path: str | Path) -> SessionRecord:
    config = None
    bindings: list[AgentBinding] = []
    events: list[SessionEvent] = []
    digest = ""
    version = RECORD_VERSION
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            kind = entry.get("kind")
            if kind == "meta":
                config = config_from_json(entry["config"])
                bindings = [AgentBinding.from_json(b) for b in entry["bindings"]]
                version = entry.get("version", RECORD_VERSION)
            elif kind == "event":
                events.append(event_from_json(entry["event"]))
            elif kind == "final":
                digest = entry["digest"]
    if config is None:
        raise ValueError(f"{path}: no meta line; not a session record")
    return SessionRecord(config, bindings, events, digest, version)


class IncrementalWriter:
    """Streams record lines as the session runs; crash leaves a readable prefix."""

    def __init__(self, path: str | Path, config: GameConfig,
                 bindings: list[AgentBinding]):
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self._path.open("w", encoding="utf-8")
        self._fh.write(_dump({
            "kind": "meta",
            "version": RECORD_VERSION,
            "config": config_to_json(config),
            "bindings": [b.to_json() for b in bindings],
        }) + "\n")

    def event(self, event: SessionEvent) -> None:
        self._fh.write(_dump({"kind": "event", "event": event_to_json(event)}) + "\n")

    def close(self, digest: str) -> None:
        self._fh.write(_dump({"kind": "final", "digest": digest}) + "\n")
        self._fh.close()


def replay(record: SessionRecord) -> GameState:
    """Re-drive the engine from the recorded inputs; pure, no agents involved."""
    state = new_game(record.config)

    def role_id(role: Role) -> int | None:
        ids = [p.id for p in state.players if p.role is role]
        return ids[0] if ids else None

    for event in record.events:
        payload = event.payload
        if isinstance(payload, NightResult) and payload.night_record is not None:
            r = payload.night_record
            for wolf_id in sorted(r.werewolf_choices):
                state = submit_night_action(
                    state, wolf_id, Kill(r.werewolf_choices[wolf_id])
                )
            if r.seer_submitted:
                seer = role_id(Role.SEER)
                action = Reveal(r.seer_target) if r.seer_target is not None else Pass()
                state = submit_night_action(state, seer, action)
            if r.witch_submitted:
                witch = role_id(Role.WITCH)
                if r.witch_cure or r.witch_poison is not None:
                    action = WitchNight(cure=r.witch_cure, poison_target=r.witch_poison)
                else:
                    action = Pass()
                state = submit_night_action(state, witch, action)
            state, _ = resolve_night(state)
        elif isinstance(payload, StatementDone):
            state, _ = record_statement(state, payload.player, payload.text)
        elif isinstance(payload, VoteResult):
            state, _, _ = process_voting(state, payload.votes)
    return state


def verify_replay(record: SessionRecord) -> tuple[bool, str]:
    """(digests match, recomputed digest)."""
    digest = state_digest(replay(record))
    return digest == record.final_digest, digest
