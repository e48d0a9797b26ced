"""Deterministic, side-effect-free Werewolf rules engine."""

from .errors import (
    DuplicateSubmission,
    EliminatedSpeaker,
    GameError,
    IllegalAction,
    InactiveTarget,
    InvalidConfig,
    MissingSubmission,
    MissingVote,
    OutOfTurn,
    UnknownPlayer,
    WrongPhase,
)
from .rules import (
    judge,
    legal_actions,
    process_voting,
    record_statement,
    resolve_night,
    submit_night_action,
)
from .state import (
    GameState,
    clone_state,
    PendingNight,
    canonical_json,
    config_from_json,
    config_to_json,
    new_game,
    state_digest,
    state_from_json,
    state_to_json,
)
from .types import (
    Action,
    DayStage,
    EliminationCause,
    GameConfig,
    GameOutcome,
    Kill,
    KillRecord,
    NightAction,
    OutcomeReason,
    Pass,
    Phase,
    PhaseKind,
    PlayerState,
    PlayerStatus,
    Reveal,
    Role,
    Statement,
    Team,
    Vote,
    VoteTally,
    Winner,
    WitchNight,
    WitchRecord,
    action_label,
)
from .views import PlayerView, view_for, view_to_json

__all__ = [
    "Action",
    "DayStage",
    "DuplicateSubmission",
    "EliminatedSpeaker",
    "EliminationCause",
    "GameConfig",
    "GameError",
    "GameOutcome",
    "GameState",
    "IllegalAction",
    "InactiveTarget",
    "InvalidConfig",
    "Kill",
    "KillRecord",
    "MissingSubmission",
    "MissingVote",
    "NightAction",
    "OutOfTurn",
    "OutcomeReason",
    "Pass",
    "PendingNight",
    "Phase",
    "PhaseKind",
    "PlayerState",
    "PlayerStatus",
    "PlayerView",
    "Reveal",
    "Role",
    "Statement",
    "Team",
    "UnknownPlayer",
    "Vote",
    "VoteTally",
    "Winner",
    "WitchNight",
    "WitchRecord",
    "WrongPhase",
    "action_label",
    "canonical_json",
    "clone_state",
    "config_from_json",
    "config_to_json",
    "judge",
    "legal_actions",
    "new_game",
    "process_voting",
    "record_statement",
    "resolve_night",
    "state_digest",
    "state_from_json",
    "state_to_json",
    "submit_night_action",
    "view_for",
    "view_to_json",
]
