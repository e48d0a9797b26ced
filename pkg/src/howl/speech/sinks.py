"""Audio output sinks: playback is an interface, not a sound card.

A sink's `play` returns when the clip has finished playing; pacing (really
waiting out the clip duration) is what makes queue timing observable.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from typing import Protocol

from .tts import AudioClip


class AudioSink(Protocol):
    async def play(self, clip: AudioClip) -> None: ...


@dataclass(frozen=True)
class PlaybackEvent:
    utterance: int
    index: int
    started_at: float
    duration: float


@dataclass
class RecordingSink:
    """Paces playback by `time_scale` x real time and records start events.

    time_scale=1.0 simulates a speaker; 0.0 plays back instantly (headless).
    """

    time_scale: float = 1.0
    events: list[PlaybackEvent] = field(default_factory=list)

    async def play(self, clip: AudioClip) -> None:
        loop = asyncio.get_running_loop()
        self.events.append(
            PlaybackEvent(clip.utterance, clip.index, loop.time(), clip.duration)
        )
        if self.time_scale > 0:
            await asyncio.sleep(clip.duration * self.time_scale)


class NullSink:
    """Discards audio with no pacing; for rule-only simulations."""

    async def play(self, clip: AudioClip) -> None:
        return None


@dataclass
class FanoutSink:
    """Forwards each clip to several sinks; completes when the slowest does."""

    sinks: list[AudioSink]

    async def play(self, clip: AudioClip) -> None:
        await asyncio.gather(*(s.play(clip) for s in self.sinks))
