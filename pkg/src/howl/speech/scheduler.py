"""Pipelined speech scheduling: synthesize ahead, play back strictly in order.

Three stages: segmentation feeds chunks in, a bounded worker pool synthesizes
them concurrently, and one emitter releases audio in (utterance, index) order.
Across utterances a turn gate guarantees only one utterance is audible at a
time and that utterance ids play in increasing order.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from typing import AsyncIterator

from .sinks import AudioSink
from .tts import AudioClip, TtsBackend, synthesize
from .segment import SentenceChunk
from .voices import VoiceProfile


@dataclass(frozen=True)
class UtteranceHandle:
    utterance: int
    speaker: int
    voice: VoiceProfile


@dataclass
class PipelineMetrics:
    utterance: int
    first_audio_latency: float | None = None
    inter_chunk_gaps: list[float] = field(default_factory=list)
    synth_times: list[float] = field(default_factory=list)
    playback_times: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "utterance": self.utterance,
            "first_audio_latency": self.first_audio_latency,
            "inter_chunk_gaps": self.inter_chunk_gaps,
            "synth_times": self.synth_times,
            "playback_times": self.playback_times,
        }


class SpeechScheduler:
    """Per-session speech pipeline; one instance owns the playback order."""

    def __init__(
        self,
        backend: TtsBackend,
        sink: AudioSink,
        *,
        workers: int = 2,
        synth_timeout_s: float = 10.0,
        on_degradation=None,
    ):
        self.backend = backend
        self.sink = sink
        self.workers = workers
        self.synth_timeout_s = synth_timeout_s
        self.on_degradation = on_degradation
        self.metrics: list[PipelineMetrics] = []
        self._next_utterance = 0
        self._play_turn = 0
        self._turn_changed = asyncio.Condition()

    def new_utterance(self, speaker: int, voice: VoiceProfile) -> UtteranceHandle:
        handle = UtteranceHandle(self._next_utterance, speaker, voice)
        self._next_utterance += 1
        return handle

    async def _wait_turn(self, utterance: int) -> None:
        async with self._turn_changed:
            await self._turn_changed.wait_for(lambda: self._play_turn == utterance)

    async def _release_turn(self, utterance: int) -> None:
        async with self._turn_changed:
            self._play_turn = utterance + 1
            self._turn_changed.notify_all()

    async def speak(
        self,
        handle: UtteranceHandle,
        chunks: AsyncIterator[SentenceChunk],
        *,
        stream_started_at: float | None = None,
    ) -> PipelineMetrics:
        """Synthesize and play one utterance; returns when playback completes.

        Synthesis of chunk k+1 proceeds while chunk k plays; the first clip may
        start before later chunks even exist.
        """
        loop = asyncio.get_running_loop()
        started = stream_started_at if stream_started_at is not None else loop.time()
        metrics = PipelineMetrics(utterance=handle.utterance)

        clips: dict[int, AudioClip] = {}
        total = {"count": None}
        clip_ready = asyncio.Condition()
        pool = asyncio.Semaphore(self.workers)

        async def synth_one(chunk: SentenceChunk) -> None:
            async with pool:
                t0 = loop.time()
                clip = await synthesize(
                    chunk,
                    handle.voice,
                    self.backend,
                    timeout_s=self.synth_timeout_s,
                    on_degradation=self.on_degradation,
                )
                elapsed = loop.time() - t0
            async with clip_ready:
                clips[chunk.index] = clip
                metrics.synth_times.append(elapsed)
                clip_ready.notify_all()

        async def consume() -> None:
            count = 0
            tasks = []
            try:
                async for chunk in chunks:
                    count = max(count, chunk.index + 1)
                    tasks.append(asyncio.create_task(synth_one(chunk)))
            finally:
                # even on upstream failure, unblock the emitter at what we have
                async with clip_ready:
                    total["count"] = count
                    clip_ready.notify_all()
            if tasks:
                await asyncio.gather(*tasks)

        consumer = asyncio.create_task(consume())
        try:
            index = 0
            last_end: float | None = None
            waited_turn = False
            while True:
                async with clip_ready:
                    await clip_ready.wait_for(
                        lambda: index in clips
                        or (total["count"] is not None and index >= total["count"])
                    )
                    if index not in clips:
                        break
                    clip = clips.pop(index)
                if not waited_turn:
                    await self._wait_turn(handle.utterance)
                    waited_turn = True
                play_start = loop.time()
                if index == 0:
                    metrics.first_audio_latency = play_start - started
                if last_end is not None:
                    metrics.inter_chunk_gaps.append(max(0.0, play_start - last_end))
                await self.sink.play(clip)
                last_end = loop.time()
                metrics.playback_times.append(last_end - play_start)
                index += 1
        finally:
            await consumer
            if not waited_turn:
                # zero-chunk utterance still takes and yields its playback turn
                await self._wait_turn(handle.utterance)
            await self._release_turn(handle.utterance)
        self.metrics.append(metrics)
        return metrics
