"""Domain types for the Werewolf rules engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidConfig


class Role(str, Enum):
    WEREWOLF = "werewolf"
    VILLAGER = "villager"
    SEER = "seer"
    WITCH = "witch"

    @property
    def team(self) -> Team:
        return Team.WEREWOLVES if self is Role.WEREWOLF else Team.VILLAGE

    @property
    def display(self) -> str:
        return self.value.capitalize()


class Team(str, Enum):
    WEREWOLVES = "werewolves"
    VILLAGE = "village"


class PlayerStatus(str, Enum):
    ACTIVE = "active"
    ELIMINATED = "eliminated"


class EliminationCause(str, Enum):
    WEREWOLF_KILL = "werewolf_kill"
    POISON = "poison"
    VOTE = "vote"


class PhaseKind(str, Enum):
    NIGHT = "night"
    DAY = "day"
    ENDED = "ended"


class DayStage(str, Enum):
    DISCUSSION = "discussion"
    VOTING = "voting"


@dataclass(frozen=True)
class Phase:
    kind: PhaseKind
    round: int = 0
    stage: DayStage | None = None

    @staticmethod
    def night(round: int) -> Phase:
        return Phase(PhaseKind.NIGHT, round)

    @staticmethod
    def day_discussion(round: int) -> Phase:
        return Phase(PhaseKind.DAY, round, DayStage.DISCUSSION)

    @staticmethod
    def day_voting(round: int) -> Phase:
        return Phase(PhaseKind.DAY, round, DayStage.VOTING)

    @staticmethod
    def ended() -> Phase:
        return Phase(PhaseKind.ENDED)

    @property
    def is_night(self) -> bool:
        return self.kind is PhaseKind.NIGHT

    def is_day(self, stage: DayStage) -> bool:
        return self.kind is PhaseKind.DAY and self.stage is stage


DEFAULT_DISTRIBUTION = {
    Role.WEREWOLF: 2,
    Role.VILLAGER: 2,
    Role.SEER: 1,
    Role.WITCH: 1,
}


@dataclass
class GameConfig:
    """Static game parameters; validated before the first state is built."""

    player_names: list[str]
    role_distribution: dict[Role, int] = field(
        default_factory=lambda: dict(DEFAULT_DISTRIBUTION)
    )
    max_rounds: int = 15
    rng_seed: int = 0
    witch_cures: int = 1
    witch_poisons: int = 1
    neutral_aliases: bool = True

    def validate(self) -> None:
        names = self.player_names
        if not names or any(not n.strip() for n in names):
            raise InvalidConfig("player names must be non-empty strings")
        if len(set(names)) != len(names):
            raise InvalidConfig("player names must be unique")
        counts = {role: self.role_distribution.get(role, 0) for role in Role}
        if any(c < 0 for c in counts.values()):
            raise InvalidConfig("role counts cannot be negative")
        total = sum(counts.values())
        if total != len(names):
            raise InvalidConfig(
                f"role counts sum to {total} but there are {len(names)} players"
            )
        if counts[Role.WEREWOLF] < 1:
            raise InvalidConfig("at least one werewolf is required")
        if total - counts[Role.WEREWOLF] < 1:
            raise InvalidConfig("at least one village-team player is required")
        if counts[Role.SEER] > 1 or counts[Role.WITCH] > 1:
            raise InvalidConfig("at most one seer and one witch are allowed")
        if self.max_rounds < 1:
            raise InvalidConfig("max_rounds must be at least 1")
        if self.witch_cures < 0 or self.witch_poisons < 0:
            raise InvalidConfig("witch prop counts cannot be negative")


@dataclass
class PlayerState:
    id: int
    name: str
    role: Role
    status: PlayerStatus = PlayerStatus.ACTIVE
    elimination_cause: EliminationCause | None = None

    @property
    def is_active(self) -> bool:
        return self.status is PlayerStatus.ACTIVE


# --- Actions -----------------------------------------------------------------


@dataclass(frozen=True)
class Statement:
    """Day-discussion speaking action (the text itself travels separately)."""


@dataclass(frozen=True)
class Vote:
    target: int


@dataclass(frozen=True)
class Kill:
    target: int


@dataclass(frozen=True)
class Reveal:
    target: int


@dataclass(frozen=True)
class WitchNight:
    cure: bool = False
    poison_target: int | None = None


@dataclass(frozen=True)
class Pass:
    """Explicit night no-op, available to seer and witch only."""


NightAction = Kill | Reveal | WitchNight | Pass
Action = Statement | Vote | Kill | Reveal | WitchNight | Pass


def action_label(action: Action, name_of) -> str:
    """Canonical grammar string for an action; `name_of(id)` renders a player."""
    if isinstance(action, Statement):
        return "STATEMENT"
    if isinstance(action, Vote):
        return f"VOTE {name_of(action.target)}"
    if isinstance(action, Kill):
        return f"KILL {name_of(action.target)}"
    if isinstance(action, Reveal):
        return f"REVEAL {name_of(action.target)}"
    if isinstance(action, WitchNight):
        if action.cure:
            return "CURE"
        if action.poison_target is not None:
            return f"POISON {name_of(action.poison_target)}"
        return "PASS"
    if isinstance(action, Pass):
        return "PASS"
    raise TypeError(f"not an action: {action!r}")


# --- Results -----------------------------------------------------------------


@dataclass(frozen=True)
class VoteTally:
    votes: dict[int, int]
    counts: dict[int, int]
    eliminated: int | None
    tie: bool


class Winner(str, Enum):
    WEREWOLVES = "werewolves"
    VILLAGE = "village"
    DRAW = "draw"


class OutcomeReason(str, Enum):
    WEREWOLVES_ERADICATED = "werewolves_eradicated"
    WEREWOLF_PARITY = "werewolf_parity"
    MAX_ROUNDS_EXHAUSTED = "max_rounds_exhausted"


@dataclass(frozen=True)
class GameOutcome:
    winner: Winner
    reason: OutcomeReason
    final_round: int


@dataclass(frozen=True)
class KillRecord:
    """One werewolf kill attempt (recorded even when the witch cancels it)."""

    round: int
    target: int


@dataclass(frozen=True)
class WitchRecord:
    round: int
    cured: bool
    cure_target: int | None
    poison_target: int | None
