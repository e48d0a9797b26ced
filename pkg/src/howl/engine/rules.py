"""Game operations: every function maps (state, input) -> (state', emissions).

Inputs are never mutated; callers receive a fresh state plus the
(visibility, payload) pairs the session layer should log and route.
"""

from __future__ import annotations

from collections import Counter

from .errors import (
    DuplicateSubmission,
    EliminatedSpeaker,
    IllegalAction,
    InactiveTarget,
    MissingSubmission,
    MissingVote,
    OutOfTurn,
    WrongPhase,
)
from .state import GameState, PendingNight, clone_state
from .types import (
    Action,
    DayStage,
    EliminationCause,
    GameOutcome,
    Kill,
    KillRecord,
    NightAction,
    OutcomeReason,
    Pass,
    Phase,
    PhaseKind,
    PlayerStatus,
    Reveal,
    Role,
    Statement,
    Vote,
    VoteTally,
    Winner,
    WitchNight,
    WitchRecord,
)
from ..events import (
    PUBLIC,
    SYSTEM,
    Emission,
    NightRecord,
    NightResult,
    Outcome,
    PhaseChange,
    RevealFact,
    StatementDone,
    VoteResult,
    private,
)


def judge(state: GameState) -> GameOutcome | None:
    """Win check: pure in the active role counts and the round number."""
    active = state.active_players()
    wolves = sum(1 for p in active if p.role is Role.WEREWOLF)
    others = len(active) - wolves
    if wolves == 0:
        return GameOutcome(Winner.VILLAGE, OutcomeReason.WEREWOLVES_ERADICATED, state.round)
    if wolves >= others:
        return GameOutcome(Winner.WEREWOLVES, OutcomeReason.WEREWOLF_PARITY, state.round)
    if state.round > state.config.max_rounds:
        return GameOutcome(
            Winner.DRAW, OutcomeReason.MAX_ROUNDS_EXHAUSTED, state.config.max_rounds
        )
    return None


def legal_actions(state: GameState, player_id: int) -> set[Action]:
    """Abstract actions open to a player right now; total over existing players."""
    p = state.player(player_id)
    if not p.is_active or not state.game_status:
        return set()
    phase = state.phase
    if phase.is_day(DayStage.DISCUSSION):
        return {Statement()}
    if phase.is_day(DayStage.VOTING):
        return {Vote(t.id) for t in state.active_players() if t.id != player_id}
    if phase.is_night:
        if p.role is Role.WEREWOLF:
            return {
                Kill(t.id)
                for t in state.active_players()
                if t.role is not Role.WEREWOLF
            }
        if p.role is Role.SEER:
            acts: set[Action] = {
                Reveal(t.id) for t in state.active_players() if t.id != player_id
            }
            acts.add(Pass())
            return acts
        if p.role is Role.WITCH:
            acts = {Pass()}
            if state.num_cure >= 1 and state.pending_night.chosen_kill is not None:
                acts.add(WitchNight(cure=True))
            if state.num_poison >= 1:
                acts.update(
                    WitchNight(poison_target=t.id) for t in state.active_players()
                )
            return acts
    return set()


def submit_night_action(
    state: GameState, player_id: int, action: NightAction
) -> GameState:
    """Record one player's night submission; the state is otherwise untouched."""
    state = clone_state(state)
    if not state.phase.is_night:
        raise WrongPhase(f"night actions cannot be submitted during {state.phase.kind.value}")
    p = state.player(player_id)
    if player_id in state.pending_night.submitted:
        raise DuplicateSubmission(f"player {player_id} already acted this night")
    if isinstance(action, WitchNight) and not action.cure and action.poison_target is None:
        action = Pass()  # an empty witch action is a pass
    if action not in legal_actions(state, player_id):
        raise IllegalAction(f"{action!r} is not legal for player {player_id} now")

    pending = state.pending_night
    if isinstance(action, Kill):
        pending.werewolf_choices[player_id] = action.target
    elif isinstance(action, Reveal):
        pending.seer_target = action.target
    elif isinstance(action, WitchNight):
        pending.witch_action = action
    pending.submitted.add(player_id)

    if p.role is Role.WEREWOLF:
        wolves = {w.id for w in state.actives_with_role(Role.WEREWOLF)}
        if wolves <= pending.submitted:
            pending.chosen_kill = _arbitrate_kill(state, pending)
    return state


def _arbitrate_kill(state: GameState, pending: PendingNight) -> int | None:
    """Unanimous target, else a seeded-uniform pick among the distinct choices."""
    targets = sorted(set(pending.werewolf_choices.values()))
    if not targets:
        return None
    if len(targets) == 1:
        return targets[0]
    return state.rng().choice(targets)


def resolve_night(state: GameState) -> tuple[GameState, list[Emission]]:
    """Apply the night in order: werewolves, then seer, then witch."""
    state = clone_state(state)
    if not state.phase.is_night:
        raise WrongPhase("resolve_night outside a night phase")
    pending = state.pending_night
    wolves = {w.id for w in state.actives_with_role(Role.WEREWOLF)}
    missing = wolves - pending.submitted
    if missing:
        raise MissingSubmission(f"werewolves {sorted(missing)} have not submitted")
    if pending.chosen_kill is None and pending.werewolf_choices:
        pending.chosen_kill = _arbitrate_kill(state, pending)

    emissions: list[Emission] = []
    rnd = state.round
    seers = state.actives_with_role(Role.SEER)
    witches = state.actives_with_role(Role.WITCH)

    if pending.seer_target is not None and seers:
        target_role = state.player(pending.seer_target).role
        state.seer_knowledge[pending.seer_target] = target_role
        emissions.append(
            (
                private(seers[0].id),
                NightResult(round=rnd, reveal=RevealFact(pending.seer_target, target_role)),
            )
        )

    cured = False
    poisoned: int | None = None
    action = pending.witch_action
    if action is not None:
        if action.cure and pending.chosen_kill is not None and state.num_cure >= 1:
            cured = True
            state.num_cure -= 1
        if action.poison_target is not None and state.num_poison >= 1:
            poisoned = action.poison_target
            state.num_poison -= 1
    if witches and witches[0].id in pending.submitted:
        state.witch_log.append(
            WitchRecord(
                round=rnd,
                cured=cured,
                cure_target=pending.chosen_kill if cured else None,
                poison_target=poisoned,
            )
        )

    deaths: list[int] = []
    if poisoned is not None and state.player(poisoned).is_active:
        _eliminate(state, poisoned, EliminationCause.POISON)
        deaths.append(poisoned)
    if pending.chosen_kill is not None:
        state.werewolf_log.append(KillRecord(round=rnd, target=pending.chosen_kill))
        victim = state.player(pending.chosen_kill)
        if not cured and victim.is_active:
            _eliminate(state, victim.id, EliminationCause.WEREWOLF_KILL)
            deaths.append(victim.id)

    announcement = NightResult(round=rnd, deaths=tuple(sorted(deaths)))
    state.public_log.append(announcement)
    emissions.append((PUBLIC, announcement))
    emissions.append(
        (
            SYSTEM,
            NightResult(
                round=rnd,
                night_record=NightRecord(
                    werewolf_choices=dict(pending.werewolf_choices),
                    seer_target=pending.seer_target,
                    seer_submitted=bool(seers and seers[0].id in pending.submitted),
                    witch_cure=bool(action and action.cure),
                    witch_poison=action.poison_target if action else None,
                    witch_submitted=bool(witches and witches[0].id in pending.submitted),
                    chosen_kill=pending.chosen_kill,
                ),
            ),
        )
    )

    state.pending_night = PendingNight()
    outcome = judge(state)
    if outcome is not None:
        _end_game(state, outcome, emissions)
    else:
        state.phase = Phase.day_discussion(rnd)
        state.speak_queue = [p.id for p in state.active_players()]
        _announce_phase(state, emissions)
    return state, emissions


def record_statement(
    state: GameState, player_id: int, text: str
) -> tuple[GameState, list[Emission]]:
    """Append one discussion statement; advances to voting after the last speaker."""
    state = clone_state(state)
    if not state.phase.is_day(DayStage.DISCUSSION):
        raise WrongPhase("statements are only accepted during day discussion")
    p = state.player(player_id)
    if not p.is_active:
        raise EliminatedSpeaker(f"player {player_id} has been eliminated")
    if not state.speak_queue or state.speak_queue[0] != player_id:
        raise OutOfTurn(f"it is not player {player_id}'s turn to speak")

    utterance = state.next_utterance
    state.next_utterance += 1
    payload = StatementDone(player=player_id, utterance=utterance, text=text)
    state.public_log.append(payload)
    emissions: list[Emission] = [(PUBLIC, payload)]
    state.speak_queue.pop(0)
    if not state.speak_queue:
        state.phase = Phase.day_voting(state.round)
        _announce_phase(state, emissions)
    return state, emissions


def process_voting(
    state: GameState, votes: dict[int, int]
) -> tuple[GameState, VoteTally, list[Emission]]:
    """Tally the day vote; strict plurality eliminates, a top tie spares everyone."""
    state = clone_state(state)
    if not state.phase.is_day(DayStage.VOTING):
        raise WrongPhase("votes can only be processed during day voting")
    active_ids = [p.id for p in state.active_players()]
    for pid in active_ids:
        if pid not in votes:
            raise MissingVote(f"player {pid} has not voted")
    for voter, target in votes.items():
        if voter not in active_ids:
            raise IllegalAction(f"player {voter} is not an active voter")
        state.player(target)
        if target not in active_ids:
            raise InactiveTarget(f"vote target {target} is not active")
        if target == voter:
            raise IllegalAction(f"player {voter} cannot vote for themselves")

    counts = Counter(votes.values())
    top = max(counts.values())
    leaders = [t for t, c in counts.items() if c == top]
    eliminated = leaders[0] if len(leaders) == 1 else None
    tie = eliminated is None
    if eliminated is not None:
        _eliminate(state, eliminated, EliminationCause.VOTE)
    tally = VoteTally(votes=dict(votes), counts=dict(counts), eliminated=eliminated, tie=tie)

    result = VoteResult(
        round=state.round,
        votes=dict(votes),
        counts=dict(counts),
        eliminated=eliminated,
        tie=tie,
    )
    state.public_log.append(result)
    emissions: list[Emission] = [(PUBLIC, result)]

    state.round += 1
    outcome = judge(state)
    if outcome is not None:
        _end_game(state, outcome, emissions)
    else:
        state.phase = Phase.night(state.round)
        _announce_phase(state, emissions)
    return state, tally, emissions


def _eliminate(state: GameState, player_id: int, cause: EliminationCause) -> None:
    p = state.player(player_id)
    p.status = PlayerStatus.ELIMINATED
    p.elimination_cause = cause


def _announce_phase(state: GameState, emissions: list[Emission]) -> None:
    payload = PhaseChange(state.phase)
    state.public_log.append(payload)
    emissions.append((PUBLIC, payload))


def _end_game(
    state: GameState, outcome: GameOutcome, emissions: list[Emission]
) -> None:
    state.outcome = outcome
    state.game_status = False
    state.phase = Phase.ended()
    payload = Outcome(outcome)
    state.public_log.append(payload)
    emissions.append((PUBLIC, payload))
    _announce_phase(state, emissions)
