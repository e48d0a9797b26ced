"""TTS backends and synthesis: text chunks become 16-bit mono 32 kHz clips.

Backend contract: `speak(text, reference_id)` returns RIFF/WAV bytes and
`probe()` reports health. Any failure or timeout is absorbed by substituting
silence of an estimated duration; speech never stalls the game.
"""

from __future__ import annotations

import asyncio
import io
import wave
from dataclasses import dataclass
from typing import Protocol

import httpx
import numpy as np

from .errors import TtsError
from .segment import SentenceChunk
from .voices import VoiceProfile

SAMPLE_RATE = 32_000
FALLBACK_CHARS_PER_SECOND = 12.0


@dataclass(frozen=True)
class AudioClip:
    utterance: int
    index: int
    pcm: bytes  # 16-bit mono little-endian at `sample_rate`
    sample_rate: int
    duration: float

    @property
    def sample_count(self) -> int:
        return len(self.pcm) // 2


class TtsBackend(Protocol):
    async def speak(self, text: str, reference_id: str) -> bytes: ...

    async def probe(self) -> bool: ...


# --- WAV handling ---------------------------------------------------------------


def encode_wav(pcm: bytes, sample_rate: int = SAMPLE_RATE) -> bytes:
    out = io.BytesIO()
    with wave.open(out, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate)
        w.writeframes(pcm)
    return out.getvalue()


def decode_wav(data: bytes) -> tuple[bytes, int]:
    """RIFF/WAV bytes -> (mono 16-bit PCM, source rate)."""
    try:
        with wave.open(io.BytesIO(data), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            frames = w.readframes(w.getnframes())
    except (wave.Error, EOFError) as exc:
        raise TtsError(f"unparseable WAV response: {exc}") from exc
    if width == 2:
        samples = np.frombuffer(frames, dtype="<i2").astype(np.float32)
    elif width == 1:
        samples = (np.frombuffer(frames, dtype=np.uint8).astype(np.float32) - 128.0) * 256.0
    elif width == 4:
        samples = np.frombuffer(frames, dtype="<i4").astype(np.float32) / 65536.0
    else:
        raise TtsError(f"unsupported sample width {width}")
    if channels > 1:
        samples = samples.reshape(-1, channels).mean(axis=1)
    pcm = np.clip(samples, -32768, 32767).astype("<i2").tobytes()
    return pcm, rate


def resample(pcm: bytes, src_rate: int, dst_rate: int = SAMPLE_RATE) -> bytes:
    if src_rate == dst_rate or not pcm:
        return pcm
    samples = np.frombuffer(pcm, dtype="<i2").astype(np.float32)
    n_out = max(1, int(round(len(samples) * dst_rate / src_rate)))
    x_out = np.linspace(0.0, len(samples) - 1.0, n_out)
    out = np.interp(x_out, np.arange(len(samples)), samples)
    return np.clip(out, -32768, 32767).astype("<i2").tobytes()


def silence_clip(utterance: int, index: int, duration: float) -> AudioClip:
    n = max(1, int(round(duration * SAMPLE_RATE)))
    return AudioClip(
        utterance=utterance,
        index=index,
        pcm=b"\x00\x00" * n,
        sample_rate=SAMPLE_RATE,
        duration=n / SAMPLE_RATE,
    )


# --- Backends ---------------------------------------------------------------------


class MockTtsBackend:
    """Deterministic silence, length-proportional to the text.

    `synth_delay_s` models synthesis latency; `fail` forces the degradation
    path. Used by every latency acceptance test.
    """

    def __init__(self, chars_per_second: float = FALLBACK_CHARS_PER_SECOND,
                 synth_delay_s: float = 0.0, fail: bool = False):
        self.chars_per_second = chars_per_second
        self.synth_delay_s = synth_delay_s
        self.fail = fail
        self.calls: list[tuple[str, str]] = []

    async def speak(self, text: str, reference_id: str) -> bytes:
        self.calls.append((text, reference_id))
        if self.synth_delay_s > 0:
            await asyncio.sleep(self.synth_delay_s)
        if self.fail:
            raise TtsError("mock backend configured to fail")
        duration = max(len(text), 1) / self.chars_per_second
        n = int(round(duration * SAMPLE_RATE))
        return encode_wav(b"\x00\x00" * n)

    async def probe(self) -> bool:
        return not self.fail


@dataclass
class HttpTtsBackend:
    """POST {endpoint}/tts with {text, reference_id}; expects WAV bytes back."""

    endpoint: str
    timeout_s: float = 10.0

    async def speak(self, text: str, reference_id: str) -> bytes:
        url = self.endpoint.rstrip("/") + "/tts"
        async with httpx.AsyncClient(timeout=self.timeout_s) as client:
            response = await client.post(
                url, json={"text": text, "reference_id": reference_id}
            )
            response.raise_for_status()
            return response.content

    async def probe(self) -> bool:
        url = self.endpoint.rstrip("/") + "/health"
        try:
            async with httpx.AsyncClient(timeout=self.timeout_s) as client:
                response = await client.get(url)
                return response.status_code == 200
        except httpx.TransportError:
            return False


# --- Synthesis --------------------------------------------------------------------


async def synthesize(
    chunk: SentenceChunk,
    voice: VoiceProfile,
    backend: TtsBackend,
    *,
    timeout_s: float = 10.0,
    on_degradation=None,
) -> AudioClip:
    """One chunk to one clip; failures become silence plus a degradation signal."""
    try:
        wav = await asyncio.wait_for(
            backend.speak(chunk.text, voice.reference_id), timeout_s
        )
        pcm, rate = decode_wav(wav)
        pcm = resample(pcm, rate)
        return AudioClip(
            utterance=chunk.utterance,
            index=chunk.index,
            pcm=pcm,
            sample_rate=SAMPLE_RATE,
            duration=(len(pcm) // 2) / SAMPLE_RATE,
        )
    except (TtsError, asyncio.TimeoutError, httpx.HTTPError, OSError) as exc:
        reason = "backend-timeout" if isinstance(exc, asyncio.TimeoutError) else str(exc)
        if on_degradation is not None:
            on_degradation(chunk.utterance, chunk.index, reason)
        estimated = max(len(chunk.text), 1) / FALLBACK_CHARS_PER_SECOND
        return silence_clip(chunk.utterance, chunk.index, estimated)
