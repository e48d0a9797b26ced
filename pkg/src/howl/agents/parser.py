"""Reply grammar: free-form reasoning followed by one `ACTION: <VERB> [<PLAYER>]` line."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .aliases import AliasMap
from .prompts import Task
from ..engine import (
    Action,
    DayStage,
    Kill,
    Pass,
    PlayerView,
    Reveal,
    Role,
    Statement,
    Vote,
    WitchNight,
)

ACTION_LINE = re.compile(
    r"^[\s>*`]*ACTION\s*:\s*([A-Za-z]+)(?:[ \t]+([^\n]*?))?[\s*`]*$",
    re.IGNORECASE | re.MULTILINE,
)

TASK_VERBS = {
    Task.VOTE: {"VOTE"},
    Task.NIGHT_ACTION: {"KILL", "REVEAL", "CURE", "POISON", "PASS"},
}


@dataclass
class ParsedReply:
    statement_text: str
    action: Action | None
    raw: str


class ParseFailure(Exception):
    """Reply did not yield a usable action; `hint` is fed back on re-prompt."""

    def __init__(self, kind: str, hint: str):
        super().__init__(f"{kind}: {hint}")
        self.kind = kind  # "malformed" | "unknown-name" | "illegal-target"
        self.hint = hint


def view_legal_actions(view: PlayerView) -> set[Action]:
    """The legal-action set derivable from a player's own view.

    Mirrors the engine rules exactly (property-tested against them); the view
    carries everything a player is entitled to know about their options.
    """
    if not view.is_active(view.self_id):
        return set()
    phase = view.phase
    if phase.is_day(DayStage.DISCUSSION):
        return {Statement()}
    if phase.is_day(DayStage.VOTING):
        return {Vote(pid) for pid, _ in view.active_players if pid != view.self_id}
    if phase.is_night:
        role = view.self_role
        if role is Role.WEREWOLF:
            pack = {view.self_id} | {pid for pid, _ in (view.fellow_werewolves or [])}
            return {Kill(pid) for pid, _ in view.active_players if pid not in pack}
        if role is Role.SEER:
            acts: set[Action] = {
                Reveal(pid) for pid, _ in view.active_players if pid != view.self_id
            }
            acts.add(Pass())
            return acts
        if role is Role.WITCH:
            acts = {Pass()}
            if (view.num_cure or 0) >= 1 and view.pending_kill is not None:
                acts.add(WitchNight(cure=True))
            if (view.num_poison or 0) >= 1:
                acts.update(WitchNight(poison_target=pid) for pid, _ in view.active_players)
            return acts
    return set()


def _strip_fences(text: str) -> str:
    return re.sub(r"^\s*```[^\n]*$", "", text, flags=re.MULTILINE)


def parse_reply(
    raw: str, task: Task, view: PlayerView, alias_map: AliasMap
) -> ParsedReply:
    text = _strip_fences(raw)
    matches = list(ACTION_LINE.finditer(text))
    statement = ACTION_LINE.sub("", text).strip()

    if task is Task.DISCUSS:
        if not statement:
            raise ParseFailure("malformed", "the reply was empty; say something short")
        return ParsedReply(statement_text=statement, action=None, raw=raw)

    if not matches:
        raise ParseFailure(
            "malformed",
            "no ACTION line found; end with one line like 'ACTION: "
            + ("VOTE <player>'" if task is Task.VOTE else "<verb> [<player>]'"),
        )
    verb = matches[-1].group(1).upper()
    arg = (matches[-1].group(2) or "").strip()
    allowed = TASK_VERBS[task]
    if verb not in allowed:
        raise ParseFailure(
            "malformed",
            f"'{verb}' is not a valid verb here; use one of {sorted(allowed)}",
        )

    action = _build_action(verb, arg, alias_map)
    legal = view_legal_actions(view)
    if action not in legal:
        raise ParseFailure(
            "illegal-target",
            f"'{verb} {arg}'".strip() + " is not legal for you right now",
        )
    return ParsedReply(statement_text=statement, action=action, raw=raw)


def _build_action(verb: str, arg: str, alias_map: AliasMap) -> Action:
    if verb == "PASS":
        return Pass()
    if verb == "CURE":
        return WitchNight(cure=True)
    if not arg:
        raise ParseFailure("malformed", f"{verb} needs a target player")
    target = alias_map.resolve(arg)
    if target is None:
        raise ParseFailure("unknown-name", f"'{arg}' is not a player in this game")
    if verb == "VOTE":
        return Vote(target)
    if verb == "KILL":
        return Kill(target)
    if verb == "REVEAL":
        return Reveal(target)
    if verb == "POISON":
        return WitchNight(poison_target=target)
    raise ParseFailure("malformed", f"unsupported verb '{verb}'")
