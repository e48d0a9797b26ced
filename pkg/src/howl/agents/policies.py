"""Built-in deterministic agents for oracle tests and headless benchmarks.

A policy turns a prompt context into a grammar-shaped text reply, exactly as
an LLM would, so the whole parse/validate path is exercised.
"""

from __future__ import annotations

import random
from typing import Callable

from .parser import view_legal_actions
from .prompts import PromptContext, Task
from ..engine import Action, Kill, Pass, Reveal, Statement, Vote, WitchNight, action_label

Policy = Callable[[PromptContext, random.Random], str]

_CHATTER = [
    "I have nothing solid yet, but the quiet ones worry me.",
    "Last night told us something; think about who benefits.",
    "I am not ready to accuse anyone without a pattern.",
    "Someone is steering this conversation a little too hard.",
    "Let us keep track of who votes with whom.",
    "I will say it plainly: I trust the early speakers least.",
]


def _labels(ctx: PromptContext, actions: set[Action]) -> list[str]:
    return sorted(action_label(a, ctx.alias_map.label) for a in actions)


def _action_reply(label: str, statement: str) -> str:
    return f"{statement}\nACTION: {label}"


def lowest_id_target(ctx: PromptContext, rng: random.Random) -> str:
    """Always pick the lowest-id legal target; witch cures before poisoning."""
    acts = view_legal_actions(ctx.view)
    if ctx.task is Task.DISCUSS:
        return "I am watching quietly this round."
    if any(isinstance(a, WitchNight) and a.cure for a in acts):
        return _action_reply("CURE", "The village needs that one alive.")
    targeted = sorted(
        (a for a in acts if not isinstance(a, (Statement, Pass, WitchNight))),
        key=lambda a: a.target,
    )
    poisons = sorted(
        (a for a in acts if isinstance(a, WitchNight) and a.poison_target is not None),
        key=lambda a: a.poison_target,
    )
    if targeted:
        choice = targeted[0]
    elif poisons:
        choice = poisons[0]
    else:
        choice = Pass()
    return _action_reply(action_label(choice, ctx.alias_map.label), "I made up my mind.")


def random_seeded(ctx: PromptContext, rng: random.Random) -> str:
    """Uniform over the legal set, reproducible from the seed."""
    if ctx.task is Task.DISCUSS:
        return rng.choice(_CHATTER)
    labels = _labels(ctx, view_legal_actions(ctx.view))
    return _action_reply(rng.choice(labels), rng.choice(_CHATTER))


def always_pass(ctx: PromptContext, rng: random.Random) -> str:
    """Pass where the rules allow; fall back to the lowest-id forced action."""
    if ctx.task is Task.DISCUSS:
        return "I will listen for now."
    acts = view_legal_actions(ctx.view)
    if any(isinstance(a, Pass) for a in acts):
        return _action_reply("PASS", "Not tonight.")
    return lowest_id_target(ctx, rng)


def always_malformed(ctx: PromptContext, rng: random.Random) -> str:
    """Never produces a usable ACTION line; exercises the fallback path."""
    return "I refuse to follow the format. Wolves? Villagers? Who can say."


POLICIES: dict[str, Policy] = {
    "lowest-id-target": lowest_id_target,
    "random-seeded": random_seeded,
    "always-pass": always_pass,
    "always-malformed": always_malformed,
}
