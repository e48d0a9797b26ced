"""Rule-violation errors raised by the game engine."""

from __future__ import annotations


class GameError(Exception):
    """Base class for every engine rejection; `code` is the wire-stable identifier."""

    code = "game-error"


class InvalidConfig(GameError):
    code = "invalid-config"


class UnknownPlayer(GameError):
    code = "unknown-player"


class WrongPhase(GameError):
    code = "wrong-phase"


class IllegalAction(GameError):
    code = "illegal-action"


class DuplicateSubmission(GameError):
    code = "duplicate-submission"


class MissingSubmission(GameError):
    code = "missing-required-submission"


class OutOfTurn(GameError):
    code = "out-of-turn"


class EliminatedSpeaker(GameError):
    code = "eliminated-speaker"


class MissingVote(GameError):
    code = "missing-vote"


class InactiveTarget(GameError):
    code = "inactive-target"
