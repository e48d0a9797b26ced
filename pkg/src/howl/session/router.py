"""Visibility-filtered event delivery to connections."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from ..events import SessionEvent


class FrameRouter(Protocol):
    def deliver(self, event: SessionEvent) -> None: ...


class NullRouter:
    def deliver(self, event: SessionEvent) -> None:
        return None


@dataclass
class RecordingRouter:
    """Test double: remembers exactly what each connection would have received.

    Connections are (key, bound player id or None for spectators); delivery
    applies the same visibility filter the live hub uses.
    """

    connections: dict[str, int | None] = field(default_factory=dict)
    delivered: dict[str, list[SessionEvent]] = field(default_factory=dict)

    def connect(self, key: str, player: int | None) -> None:
        self.connections[key] = player
        self.delivered.setdefault(key, [])

    def deliver(self, event: SessionEvent) -> None:
        for key, player in self.connections.items():
            if event.visibility.admits(player):
                self.delivered[key].append(event)
