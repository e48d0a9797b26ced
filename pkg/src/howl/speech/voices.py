"""Voice profiles: persona display names mapped to TTS reference ids."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import VoiceError


@dataclass(frozen=True)
class VoiceProfile:
    voice_id: str
    persona: str
    reference_id: str


class VoiceRegistry:
    def __init__(self, profiles: list[VoiceProfile] | None = None):
        self._by_id: dict[str, VoiceProfile] = {}
        for profile in profiles or []:
            self.add(profile)

    def add(self, profile: VoiceProfile) -> None:
        self._by_id[profile.voice_id] = profile

    def get(self, voice_id: str) -> VoiceProfile:
        try:
            return self._by_id[voice_id]
        except KeyError:
            raise VoiceError(f"unknown voice id '{voice_id}'") from None

    def for_persona(self, persona: str) -> VoiceProfile:
        for profile in self._by_id.values():
            if profile.persona == persona:
                return profile
        return self.default()

    def default(self) -> VoiceProfile:
        if not self._by_id:
            raise VoiceError("voice registry is empty")
        return next(iter(self._by_id.values()))

    def all(self) -> list[VoiceProfile]:
        return list(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)


def default_registry() -> VoiceRegistry:
    """Eight stock voices; real deployments map personas to cloned references."""
    personas = ["Aria", "Bram", "Cleo", "Dario", "Edda", "Felix", "Greta", "Hugo"]
    return VoiceRegistry(
        [
            VoiceProfile(voice_id=f"v{i}", persona=name, reference_id=f"ref-{name.lower()}")
            for i, name in enumerate(personas)
        ]
    )
