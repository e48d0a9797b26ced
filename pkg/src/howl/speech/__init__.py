"""Streaming speech pipeline: segmentation, synthesis, ordered playback."""

from .errors import TtsError, VoiceError
from .scheduler import PipelineMetrics, SpeechScheduler, UtteranceHandle
from .segment import (
    BOUNDARY_CHARS,
    DEFAULT_MIN_CHUNK_CHARS,
    SentenceChunk,
    boundary_cut,
    segment,
)
from .sinks import AudioSink, FanoutSink, NullSink, PlaybackEvent, RecordingSink
from .tts import (
    SAMPLE_RATE,
    AudioClip,
    HttpTtsBackend,
    MockTtsBackend,
    TtsBackend,
    decode_wav,
    encode_wav,
    resample,
    silence_clip,
    synthesize,
)
from .voices import VoiceProfile, VoiceRegistry, default_registry

__all__ = [
    "AudioClip",
    "AudioSink",
    "BOUNDARY_CHARS",
    "DEFAULT_MIN_CHUNK_CHARS",
    "FanoutSink",
    "HttpTtsBackend",
    "MockTtsBackend",
    "NullSink",
    "PipelineMetrics",
    "PlaybackEvent",
    "RecordingSink",
    "SAMPLE_RATE",
    "SentenceChunk",
    "SpeechScheduler",
    "TtsBackend",
    "TtsError",
    "UtteranceHandle",
    "VoiceError",
    "VoiceProfile",
    "VoiceRegistry",
    "boundary_cut",
    "decode_wav",
    "default_registry",
    "encode_wav",
    "resample",
    "segment",
    "silence_clip",
    "synthesize",
]
