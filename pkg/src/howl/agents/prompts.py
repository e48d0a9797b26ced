"""Prompt construction from player views.

Templates are plain text files with named placeholders; the default set ships
as package data and can be overridden with a directory of the same filenames.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .aliases import AliasMap
from ..engine import PlayerView, Role
from ..events import NightResult, StatementDone, VoteResult


class Task(str, Enum):
    DISCUSS = "discuss"
    VOTE = "vote"
    NIGHT_ACTION = "night_action"


TEMPLATE_NAMES = (
    "system", "user", "objective_werewolf", "objective_villager",
    "objective_seer", "objective_witch", "partners", "kill_log",
    "revelations", "witch_props", "victim",
)


def load_templates(directory: str | Path | None = None) -> dict[str, str]:
    if directory is not None:
        base = Path(directory)
        return {name: (base / f"{name}.txt").read_text() for name in TEMPLATE_NAMES}
    pkg = resources.files("howl.agents") / "templates"
    return {name: (pkg / f"{name}.txt").read_text() for name in TEMPLATE_NAMES}


_DEFAULT_TEMPLATES: dict[str, str] | None = None


def default_templates() -> dict[str, str]:
    global _DEFAULT_TEMPLATES
    if _DEFAULT_TEMPLATES is None:
        _DEFAULT_TEMPLATES = load_templates()
    return _DEFAULT_TEMPLATES


@dataclass
class PromptContext:
    view: PlayerView
    task: Task
    alias_map: AliasMap
    format_instructions: str = ""
    history_char_budget: int = 4000
    templates: dict[str, str] | None = None


def format_instructions_for(task: Task, options: tuple[str, ...] = ()) -> str:
    """The reply-schema text: free reasoning plus one final ACTION line."""
    if task is Task.DISCUSS:
        return (
            "Speak to the group in character. Provide concise reasoning in at "
            "most three sentences. Do not include an ACTION line."
        )
    if task is Task.VOTE:
        schema = "ACTION: VOTE <player>"
    else:
        schema = "ACTION: <verb> [<player>]"
    body = (
        "Give one short line of reasoning, then end your reply with exactly "
        f"one line of the form: {schema}"
    )
    if options:
        body += "\nValid actions: " + " | ".join(options)
    return body


def render_history(view: PlayerView, alias: AliasMap, budget: int) -> str:
    """Public history, newest first. Discussion lines are dropped oldest-first
    once the character budget is hit; eliminations and votes always survive."""
    entries: list[tuple[bool, str]] = []  # (is_discussion, line), newest first
    for payload in reversed(view.public_log):
        if isinstance(payload, StatementDone):
            text = alias.apply(payload.text)
            entries.append(
                (True, f'{alias.label(payload.player)} said: "{text}"')
            )
        elif isinstance(payload, NightResult):
            if payload.deaths:
                who = ", ".join(alias.label(d) for d in payload.deaths)
                entries.append((False, f"Night {payload.round}: {who} died at night."))
            else:
                entries.append((False, f"Night {payload.round}: nobody died."))
        elif isinstance(payload, VoteResult):
            detail = ", ".join(
                f"{alias.label(v)}→{alias.label(t)}"
                for v, t in sorted(payload.votes.items())
            )
            if payload.eliminated is not None:
                verdict = f"{alias.label(payload.eliminated)} was voted out"
            else:
                verdict = "tie, nobody was voted out"
            entries.append(
                (False, f"Day {payload.round} vote ({detail}): {verdict}.")
            )
    if not entries:
        return "(nothing has happened yet)"

    total = 0
    kept: list[str] = []
    truncated = False
    for is_discussion, line in entries:
        if is_discussion and total + len(line) > budget:
            truncated = True
            continue
        kept.append(line)
        total += len(line)
    if truncated:
        kept.append("[earlier discussion truncated]")
    return "\n".join(kept)


def build_prompt(ctx: PromptContext) -> list[dict[str, str]]:
    """Deterministic (system, user) message pair for one elicitation."""
    tpl = ctx.templates or default_templates()
    view = ctx.view
    alias = ctx.alias_map
    role = view.self_role

    private_lines = ""
    if role is Role.WEREWOLF:
        partners = ", ".join(
            alias.label(pid) for pid, _ in (view.fellow_werewolves or [])
        ) or "nobody"
        private_lines += tpl["partners"].format(partners=partners)
        kills = "; ".join(
            f"round {r.round}: {alias.label(r.target)}"
            for r in (view.werewolf_log or [])
        ) or "none yet"
        private_lines += tpl["kill_log"].format(kill_log=kills)
    elif role is Role.SEER:
        revelations = "; ".join(
            f"{alias.label(pid)} is a {known.display}"
            for pid, known in sorted((view.seer_knowledge or {}).items())
        ) or "none yet"
        private_lines += tpl["revelations"].format(revelations=revelations)
    elif role is Role.WITCH:
        past = "; ".join(
            "round {}: {}".format(
                r.round,
                "cured " + alias.label(r.cure_target) if r.cured
                else "poisoned " + alias.label(r.poison_target)
                if r.poison_target is not None
                else "did nothing",
            )
            for r in (view.witch_log or [])
        ) or "none yet"
        private_lines += tpl["witch_props"].format(
            num_cure=view.num_cure, num_poison=view.num_poison, witch_log=past
        )
        if view.pending_kill is not None:
            private_lines += tpl["victim"].format(victim=alias.label(view.pending_kill))

    system = tpl["system"].format(role=role.display).strip()
    user = tpl["user"].format(
        name=alias.label(view.self_id),
        objective=tpl[f"objective_{role.value}"].strip(),
        private_lines=private_lines,
        round=view.round,
        history=render_history(view, alias, ctx.history_char_budget),
        task_instructions=ctx.format_instructions
        or format_instructions_for(ctx.task),
    ).strip()
    return [
        {"role": "system", "content": system},
        {"role": "user", "content": user},
    ]
