"""Agent layer: aliasing, prompt rendering, reply parsing, policies, elicitation."""

import asyncio
import random

import pytest

from howl.agents import (
    AliasMap,
    FALLBACK_STATEMENT,
    ParseFailure,
    PromptContext,
    ScriptedAgent,
    Task,
    build_prompt,
    elicit,
    format_instructions_for,
    parse_reply,
    view_legal_actions,
)
from howl.engine import (
    Kill,
    Pass,
    Phase,
    Reveal,
    Role,
    Vote,
    WitchNight,
    action_label,
    legal_actions,
    submit_night_action,
    view_for,
)

from .helpers import SIX, ids_with_role, make_state, random_playthrough, run_full_night

CELEBS = ["Nova Reyes", "Kip Saber", "Mo Zhang", "Lia Quinn", "Rex Otter", "Juno Pike"]


def ctx_for(state, player, task, *, aliases=True, budget=4000):
    view = view_for(state, player)
    alias = AliasMap.for_players(
        [(p.id, p.name) for p in state.players], enabled=aliases
    )
    return PromptContext(
        view=view,
        task=task,
        alias_map=alias,
        format_instructions=format_instructions_for(task),
        history_char_budget=budget,
    )


# =============================================================================
# Aliases
# =============================================================================


class TestAliases:
    def test_round_trip_is_identity_on_names(self):
        alias = AliasMap.for_players(list(enumerate(CELEBS)), enabled=True)
        text = "I watched Nova Reyes argue with Mo Zhang about Juno Pike."
        assert alias.strip(alias.apply(text)) == text

    def test_apply_replaces_every_name(self):
        alias = AliasMap.for_players(list(enumerate(CELEBS)), enabled=True)
        out = alias.apply("Nova Reyes suspects Rex Otter.")
        assert out == "P0 suspects P4."

    def test_resolve_accepts_label_name_and_digits(self):
        alias = AliasMap.for_players(list(enumerate(CELEBS)), enabled=True)
        assert alias.resolve("P3") == 3
        assert alias.resolve("p3.") == 3
        assert alias.resolve("Lia Quinn") == 3
        assert alias.resolve("3") == 3
        assert alias.resolve("P9") is None
        assert alias.resolve("Nobody Here") is None

    def test_disabled_map_is_identity(self):
        alias = AliasMap.for_players(list(enumerate(CELEBS)), enabled=False)
        assert alias.label(2) == "Mo Zhang"
        assert alias.apply("Mo Zhang waves.") == "Mo Zhang waves."


# =============================================================================
# Prompts
# =============================================================================


class TestPrompts:
    def test_werewolf_prompt_names_partners_and_kills(self):
        state = make_state(SIX, names=CELEBS)
        w1, w2 = ids_with_role(state, Role.WEREWOLF)
        state, _ = run_full_night(state, kills={w1: 4, w2: 4})
        messages = build_prompt(ctx_for(state, w1, Task.DISCUSS))
        assert messages[0]["role"] == "system"
        assert "Werewolf" in messages[0]["content"]
        body = messages[1]["content"]
        assert f"P{w2}" in body
        assert "also Werewolves" in body
        assert "kills" in body.lower()
        assert "round 1: P4" in body

    def test_villager_prompt_has_no_private_sections(self):
        state = make_state(SIX, names=CELEBS)
        villager = ids_with_role(state, Role.VILLAGER)[0]
        body = build_prompt(ctx_for(state, villager, Task.DISCUSS))[1]["content"]
        assert "also Werewolves" not in body
        assert "revelations" not in body
        assert "cure" not in body

    def test_prompt_is_deterministic(self):
        state = make_state(SIX, names=CELEBS)
        a = build_prompt(ctx_for(state, 0, Task.DISCUSS))
        b = build_prompt(ctx_for(state, 0, Task.DISCUSS))
        assert a == b

    def test_no_true_names_when_aliasing_enabled(self):
        state = make_state(SIX, names=CELEBS)
        w1, w2 = ids_with_role(state, Role.WEREWOLF)
        state, _ = run_full_night(state, kills={w1: 4, w2: 4})
        # a recorded statement mentioning true names must be re-aliased on render
        from howl.engine import record_statement

        speaker = state.speak_queue[0]
        state, _ = record_statement(state, speaker, "I do not trust Rex Otter at all.")
        for p in state.players:
            for msg in build_prompt(ctx_for(state, p.id, Task.DISCUSS)):
                for name in CELEBS:
                    assert name not in msg["content"]

    def test_true_names_kept_when_aliasing_disabled(self):
        state = make_state(SIX, names=CELEBS)
        body = build_prompt(ctx_for(state, 0, Task.DISCUSS, aliases=False))[1]["content"]
        assert "Nova Reyes" in body

    def test_history_budget_drops_oldest_discussion_keeps_votes(self):
        from howl.engine import record_statement

        state = make_state(SIX, names=CELEBS)
        w1, w2 = ids_with_role(state, Role.WEREWOLF)
        state, _ = run_full_night(state, kills={w1: 4, w2: 4})
        marker_old = "FIRST-STATEMENT-MARKER"
        order = list(state.speak_queue)
        state, _ = record_statement(state, order[0], marker_old)
        for speaker in order[1:]:
            state, _ = record_statement(state, speaker, f"filler from {speaker} " + "x" * 60)
        votes = {pid: (order[0] if pid != order[0] else order[1]) for pid in order}
        from howl.engine import process_voting

        state, _, _ = process_voting(state, votes)
        body = build_prompt(ctx_for(state, w1, Task.DISCUSS, budget=260))[1]["content"]
        assert marker_old not in body  # oldest discussion truncated first
        assert "vote" in body.lower()  # vote results always retained
        assert "died at night" in body or "nobody died" in body

    def test_witch_prompt_includes_pending_victim(self):
        state = make_state(SIX, names=CELEBS)
        w1, w2 = ids_with_role(state, Role.WEREWOLF)
        state = submit_night_action(state, w1, Kill(4))
        state = submit_night_action(state, w2, Kill(4))
        witch = ids_with_role(state, Role.WITCH)[0]
        body = build_prompt(ctx_for(state, witch, Task.NIGHT_ACTION))[1]["content"]
        assert "intend to eliminate P4" in body


# =============================================================================
# Parsing
# =============================================================================


class TestParseReply:
    def test_vote_line_parses(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)
        reply = parse_reply(
            "Some reasoning about the day.\nACTION: VOTE P4",
            Task.VOTE, ctx.view, ctx.alias_map,
        )
        assert reply.action == Vote(4)
        assert "reasoning" in reply.statement_text

    def test_unknown_player_rejected(self):
        state = make_state(SIX, names=CELEBS)
        wolf = ids_with_role(state, Role.WEREWOLF)[0]
        ctx = ctx_for(state, wolf, Task.NIGHT_ACTION)
        with pytest.raises(ParseFailure) as err:
            parse_reply("ACTION: KILL P9", Task.NIGHT_ACTION, ctx.view, ctx.alias_map)
        assert err.value.kind == "unknown-name"

    def test_cure_without_cures_is_illegal_target(self):
        state = make_state(SIX, names=CELEBS, cures=0)
        w1, w2 = ids_with_role(state, Role.WEREWOLF)
        state = submit_night_action(state, w1, Kill(4))
        state = submit_night_action(state, w2, Kill(4))
        witch = ids_with_role(state, Role.WITCH)[0]
        ctx = ctx_for(state, witch, Task.NIGHT_ACTION)
        with pytest.raises(ParseFailure) as err:
            parse_reply("ACTION: CURE", Task.NIGHT_ACTION, ctx.view, ctx.alias_map)
        assert err.value.kind == "illegal-target"

    def test_missing_action_line_is_malformed(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)
        with pytest.raises(ParseFailure) as err:
            parse_reply("I simply vote for P4 in prose.", Task.VOTE, ctx.view, ctx.alias_map)
        assert err.value.kind == "malformed"

    def test_last_action_line_wins(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)
        raw = "ACTION: VOTE P2\nOn reflection, no.\nACTION: VOTE P4"
        assert parse_reply(raw, Task.VOTE, ctx.view, ctx.alias_map).action == Vote(4)

    def test_fenced_reply_parses(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)
        raw = "```\nthinking...\nACTION: VOTE P4\n```"
        assert parse_reply(raw, Task.VOTE, ctx.view, ctx.alias_map).action == Vote(4)

    def test_discussion_strips_action_lines(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_discussion(1))
        ctx = ctx_for(state, 0, Task.DISCUSS)
        reply = parse_reply(
            "I think P4 acts oddly.\nACTION: VOTE P4", Task.DISCUSS, ctx.view, ctx.alias_map
        )
        assert reply.action is None
        assert "ACTION" not in reply.statement_text

    def test_true_name_resolves_as_target(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)
        reply = parse_reply(
            "ACTION: VOTE Rex Otter", Task.VOTE, ctx.view, ctx.alias_map
        )
        assert reply.action == Vote(4)

    def test_every_parse_failure_is_consistent_with_legal_set(self):
        """Cross-check: anything rejected as illegal-target really is illegal."""
        state = make_state(SIX, names=CELEBS, cures=0, poisons=0)
        witch = ids_with_role(state, Role.WITCH)[0]
        ctx = ctx_for(state, witch, Task.NIGHT_ACTION)
        legal = view_legal_actions(ctx.view)
        for raw, action in [
            ("ACTION: CURE", WitchNight(cure=True)),
            ("ACTION: POISON P0", WitchNight(poison_target=0)),
            ("ACTION: PASS", Pass()),
        ]:
            try:
                parsed = parse_reply(raw, Task.NIGHT_ACTION, ctx.view, ctx.alias_map)
                assert parsed.action in legal
            except ParseFailure as pf:
                assert pf.kind == "illegal-target"
                assert action not in legal


class TestViewLegalityMirror:
    def test_view_legal_actions_equals_engine_on_random_states(self):
        """The view-derived legal set must match the engine's, every state."""
        mismatches = []

        def check(state):
            for p in state.players:
                view = view_for(state, p.id)
                got = view_legal_actions(view)
                want = legal_actions(state, p.id)
                if got != want:
                    mismatches.append((p.id, state.phase, got, want))

        for seed in range(8):
            random_playthrough(seed, on_state=check)
        assert mismatches == []


# =============================================================================
# Policies and elicitation
# =============================================================================


class TestScriptedPolicies:
    def run_policy(self, policy, state, player, task):
        agent = ScriptedAgent(policy, seed=5, player=player)
        ctx = ctx_for(state, player, task)

        async def main():
            return await elicit(agent, ctx)

        return asyncio.run(main())

    def test_policies_always_produce_legal_actions(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        for policy in ("lowest-id-target", "random-seeded", "always-pass"):
            result = self.run_policy(policy, state, 0, Task.VOTE)
            assert not result.fallback
            assert result.reply.action in legal_actions(state, 0)

    def test_lowest_id_picks_minimum(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        result = self.run_policy("lowest-id-target", state, 3, Task.VOTE)
        assert result.reply.action == Vote(0)

    def test_always_pass_passes_where_legal(self):
        state = make_state(SIX, names=CELEBS)
        seer = ids_with_role(state, Role.SEER)[0]
        result = self.run_policy("always-pass", state, seer, Task.NIGHT_ACTION)
        assert result.reply.action == Pass()

    def test_malformed_policy_falls_back_to_seeded_legal_action(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        result = self.run_policy("always-malformed", state, 0, Task.VOTE)
        assert result.fallback is True
        assert result.reply.action in legal_actions(state, 0)

    def test_random_policy_is_deterministic(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        a = self.run_policy("random-seeded", state, 2, Task.VOTE)
        b = self.run_policy("random-seeded", state, 2, Task.VOTE)
        assert a.reply.raw == b.reply.raw


class TestElicit:
    def test_retry_uses_hint_then_succeeds(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)
        replies = iter(["garbage with no action", "fine.\nACTION: VOTE P2"])
        seen_messages = []

        class FlakyBackend:
            async def stream_reply(self, ctx, messages):
                seen_messages.append(messages)
                yield next(replies)

        result = asyncio.run(elicit(FlakyBackend(), ctx, retry_budget=2))
        assert not result.fallback
        assert result.reply.action == Vote(2)
        assert result.attempts == 2
        assert "could not be used" in seen_messages[1][-1]["content"]

    def test_exhausted_retries_fall_back(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)

        class Hopeless:
            async def stream_reply(self, ctx, messages):
                yield "never an action line"

        rng = random.Random(9)
        result = asyncio.run(elicit(Hopeless(), ctx, retry_budget=1, fallback_rng=rng))
        assert result.fallback
        assert result.attempts == 2
        assert result.reply.action in legal_actions(state, 0)

    def test_statement_tokens_stream_outward(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_discussion(1))
        ctx = ctx_for(state, 0, Task.DISCUSS)
        collected = []

        class Talker:
            async def stream_reply(self, ctx, messages):
                for part in ["Well", " then.", " Let's", " begin."]:
                    yield part

        result = asyncio.run(
            elicit(Talker(), ctx, on_token=lambda t: collected.append(t))
        )
        assert "".join(collected) == "Well then. Let's begin."
        assert result.reply.statement_text == "Well then. Let's begin."

    def test_empty_discussion_reply_speaks_fallback_statement(self):
        state = make_state(SIX, names=CELEBS, phase=Phase.day_discussion(1))
        ctx = ctx_for(state, 0, Task.DISCUSS)
        collected = []

        class Mute:
            async def stream_reply(self, ctx, messages):
                yield ""

        result = asyncio.run(elicit(Mute(), ctx, on_token=collected.append))
        assert result.fallback
        assert result.reply.statement_text == FALLBACK_STATEMENT
        assert FALLBACK_STATEMENT in "".join(collected)

    def test_backend_error_falls_back(self):
        from howl.agents import BackendUnreachable

        state = make_state(SIX, names=CELEBS, phase=Phase.day_voting(1))
        ctx = ctx_for(state, 0, Task.VOTE)

        class Dead:
            async def stream_reply(self, ctx, messages):
                raise BackendUnreachable("connection-failure")
                yield  # pragma: no cover

        result = asyncio.run(elicit(Dead(), ctx))
        assert result.fallback
        assert result.failure.startswith("backend")
        assert result.reply.action in legal_actions(state, 0)
