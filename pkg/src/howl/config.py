"""Application configuration: one JSON file plus environment for credentials."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .agents import AgentBinding
from .engine import GameConfig, config_from_json
from .gateway import ChatBackend, HttpChatBackend, MockChatBackend, option_following_script
from .session import SessionSettings
from .speech import (
    HttpTtsBackend,
    MockTtsBackend,
    TtsBackend,
    VoiceProfile,
    VoiceRegistry,
    default_registry,
)

DEFAULT_PLAYERS = ["Aria", "Bram", "Cleo", "Dario", "Edda", "Felix"]


@dataclass
class LlmSettings:
    endpoint: str | None = None  # None -> deterministic mock backend
    model: str = "deepseek-chat"
    api_key_env: str = "HOWL_LLM_API_KEY"
    temperature: float = 0.7
    max_tokens: int = 512
    timeout_s: float = 60.0
    retries: int = 2


@dataclass
class TtsSettings:
    endpoint: str | None = None  # None -> mock silence backend
    chars_per_second: float = 12.0  # mock pacing knob
    timeout_s: float = 10.0
    synth_workers: int = 2


@dataclass
class ServiceSettings:
    host: str = "127.0.0.1"
    port: int = 8710
    audio_pace: bool = True
    record_dir: str | None = None
    static_dir: str | None = None


@dataclass
class AppConfig:
    game: GameConfig = field(
        default_factory=lambda: GameConfig(player_names=list(DEFAULT_PLAYERS))
    )
    bindings: list[AgentBinding] | None = None
    llm: LlmSettings = field(default_factory=LlmSettings)
    tts: TtsSettings = field(default_factory=TtsSettings)
    voices: list[VoiceProfile] | None = None
    session: SessionSettings = field(default_factory=SessionSettings)
    service: ServiceSettings = field(default_factory=ServiceSettings)

    def voice_registry(self) -> VoiceRegistry:
        if self.voices:
            return VoiceRegistry(self.voices)
        return default_registry()

    def default_bindings(self) -> list[AgentBinding]:
        if self.bindings:
            return self.bindings
        kind = "llm" if self.llm.endpoint else "scripted"
        return [
            AgentBinding(player=i, kind=kind, model=self.llm.model)
            for i in range(len(self.game.player_names))
        ]

    def chat_backend(self) -> ChatBackend:
        if self.llm.endpoint:
            return HttpChatBackend(
                base_url=self.llm.endpoint,
                api_key=os.environ.get(self.llm.api_key_env, ""),
                timeout_s=self.llm.timeout_s,
                retries=self.llm.retries,
            )
        return MockChatBackend(option_following_script())

    def tts_backend(self) -> TtsBackend:
        if self.tts.endpoint:
            return HttpTtsBackend(self.tts.endpoint, timeout_s=self.tts.timeout_s)
        return MockTtsBackend(chars_per_second=self.tts.chars_per_second)


def _build(cls, data: dict):
    known = {f: data[f] for f in cls.__dataclass_fields__ if f in data}
    return cls(**known)


def load_app_config(path: str | Path | None = None) -> AppConfig:
    if path is None:
        return AppConfig()
    data = json.loads(Path(path).read_text())
    cfg = AppConfig()
    if "game" in data:
        game = dict(data["game"])
        if "role_distribution" not in game and "roles" in game:
            game["role_distribution"] = game.pop("roles")
        game.setdefault("role_distribution", {})
        if not game["role_distribution"]:
            game.pop("role_distribution")
            cfg.game = GameConfig(**game)
        else:
            cfg.game = config_from_json({
                "player_names": game["player_names"],
                "role_distribution": game["role_distribution"],
                **{k: v for k, v in game.items()
                   if k not in ("player_names", "role_distribution")},
            })
    if "bindings" in data:
        cfg.bindings = [AgentBinding.from_json(b) for b in data["bindings"]]
    if "llm" in data:
        cfg.llm = _build(LlmSettings, data["llm"])
    if "tts" in data:
        cfg.tts = _build(TtsSettings, data["tts"])
    if "voices" in data:
        cfg.voices = [
            VoiceProfile(v["voice_id"], v["persona"], v["reference_id"])
            for v in data["voices"]
        ]
    if "session" in data:
        cfg.session = _build(SessionSettings, data["session"])
    if "service" in data:
        cfg.service = _build(ServiceSettings, data["service"])
    return cfg
