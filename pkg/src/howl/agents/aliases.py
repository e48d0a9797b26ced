"""Neutral-name aliasing: a bijection between table names and P<id> labels.

When enabled, every prompt-facing surface uses the neutral labels so the
model never sees a real persona name; replies are mapped back before they
touch the engine. Persona names then matter only for voice selection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


@dataclass(frozen=True)
class AliasMap:
    enabled: bool
    id_to_label: dict[int, str]
    id_to_name: dict[int, str]
    _name_pattern: re.Pattern | None = field(default=None, repr=False)

    @staticmethod
    def for_players(players: list[tuple[int, str]], enabled: bool) -> AliasMap:
        id_to_name = {pid: name for pid, name in players}
        id_to_label = {
            pid: (f"P{pid}" if enabled else name) for pid, name in players
        }
        pattern = None
        if enabled and id_to_name:
            names = sorted(id_to_name.values(), key=len, reverse=True)
            pattern = re.compile(
                r"(?<!\w)(" + "|".join(re.escape(n) for n in names) + r")(?!\w)"
            )
        return AliasMap(enabled, id_to_label, id_to_name, pattern)

    def label(self, player_id: int) -> str:
        return self.id_to_label.get(player_id, f"P{player_id}")

    def apply(self, text: str) -> str:
        """Render direction: replace true names in free text with labels."""
        if not self.enabled or self._name_pattern is None:
            return text
        name_to_id = {n: i for i, n in self.id_to_name.items()}
        return self._name_pattern.sub(
            lambda m: self.label(name_to_id[m.group(1)]), text
        )

    def strip(self, text: str) -> str:
        """Outward direction: replace P<id> labels in free text with true names."""
        if not self.enabled:
            return text
        return re.sub(
            r"(?<!\w)P(\d+)(?!\w)",
            lambda m: self.id_to_name.get(int(m.group(1)), m.group(0)),
            text,
        )

    def resolve(self, token: str) -> int | None:
        """Map a reply token back to a player id; None when nothing matches."""
        token = token.strip().strip(".,!?;:*'\"()[]")
        if not token:
            return None
        upper = token.upper()
        for pid, label in self.id_to_label.items():
            if label.upper() == upper:
                return pid
        for pid, name in self.id_to_name.items():
            if name.upper() == upper:
                return pid
        if re.fullmatch(r"P?\d+", upper):
            pid = int(upper.lstrip("P"))
            if pid in self.id_to_name:
                return pid
        return None
