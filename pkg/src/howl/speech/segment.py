"""Clause-boundary segmentation of an in-flight token stream.

Chunks are emitted as soon as the stream runs past a boundary, so synthesis
can begin while the reply is still being generated. Emission is held back by
one chunk so the final chunk can be flagged `is_final` the moment the stream
ends, whether or not it ends on a boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AsyncIterator

SENTENCE_ENDERS = frozenset(".!?;:。！？\n")
COMMAS = frozenset(",，")
BOUNDARY_CHARS = SENTENCE_ENDERS | COMMAS

DEFAULT_MIN_CHUNK_CHARS = 24


@dataclass(frozen=True)
class SentenceChunk:
    utterance: int
    index: int
    text: str
    is_final: bool


def boundary_cut(buffer: str, min_chunk_chars: int) -> int | None:
    """Index one past the first usable boundary char, or None.

    Sentence enders always cut; commas cut only once the candidate chunk
    (boundary included) is at least `min_chunk_chars` long.
    """
    for i, ch in enumerate(buffer):
        if ch in SENTENCE_ENDERS:
            return i + 1
        if ch in COMMAS and i + 1 >= min_chunk_chars:
            return i + 1
    return None


async def segment(
    tokens: AsyncIterator[str],
    *,
    utterance: int = 0,
    min_chunk_chars: int = DEFAULT_MIN_CHUNK_CHARS,
) -> AsyncIterator[SentenceChunk]:
    """Token stream in, dense-indexed chunk stream out; lossless by construction."""
    buffer = ""
    pending: str | None = None
    index = 0
    async for token in tokens:
        if not token:
            continue
        buffer += token
        while True:
            cut = boundary_cut(buffer, min_chunk_chars)
            if cut is None:
                break
            piece, buffer = buffer[:cut], buffer[cut:]
            if pending is not None:
                yield SentenceChunk(utterance, index, pending, is_final=False)
                index += 1
            pending = piece
    if buffer:
        if pending is not None:
            yield SentenceChunk(utterance, index, pending, is_final=False)
            index += 1
        pending = buffer
    if pending is not None:
        yield SentenceChunk(utterance, index, pending, is_final=True)
