"""Segmentation: boundary behavior, losslessness, fuzz against the oracle."""

import asyncio
import random
import string

from howl.gateway import tokenize
from howl.speech import SentenceChunk, segment

from .oracles import SENTENCE_ENDERS, COMMAS, segment_oracle


async def _aiter(items):
    for item in items:
        yield item


def run_segment(tokens, min_chunk_chars=24, utterance=0):
    async def main():
        return [
            c async for c in segment(
                _aiter(tokens), utterance=utterance, min_chunk_chars=min_chunk_chars
            )
        ]

    return asyncio.run(main())


class TestBoundaries:
    def test_spec_example_with_short_comma_threshold(self):
        text = "I suspect P3. He voted oddly, and he dodged."
        chunks = run_segment(tokenize(text), min_chunk_chars=8)
        assert [c.text for c in chunks] == [
            "I suspect P3.",
            " He voted oddly,",
            " and he dodged.",
        ]
        assert [c.text for c in chunks] == segment_oracle(text, 8)

    def test_default_threshold_keeps_short_comma_clause(self):
        text = "I suspect P3. He voted oddly, and he dodged."
        chunks = run_segment(tokenize(text))
        assert [c.text for c in chunks] == [
            "I suspect P3.",
            " He voted oddly, and he dodged.",
        ]
        assert [c.text for c in chunks] == segment_oracle(text, 24)

    def test_empty_stream_emits_nothing(self):
        assert run_segment([]) == []
        assert run_segment(["", ""]) == []

    def test_boundary_free_text_flushes_once(self):
        chunks = run_segment(["yes"])
        assert chunks == [SentenceChunk(0, 0, "yes", True)]

    def test_boundary_char_stays_attached(self):
        chunks = run_segment(tokenize("One. Two! Three?"))
        assert [c.text for c in chunks] == ["One.", " Two!", " Three?"]

    def test_cjk_boundaries(self):
        text = "我觉得他很可疑。你们怎么看？"
        chunks = run_segment([text])
        assert [c.text for c in chunks] == segment_oracle(text, 24)
        assert chunks[0].text.endswith("。")

    def test_exactly_one_final_chunk(self):
        for text in ["Ends on boundary.", "no boundary", "a. b. c."]:
            chunks = run_segment(tokenize(text))
            finals = [c for c in chunks if c.is_final]
            assert len(finals) == 1
            assert finals[0] is chunks[-1]

    def test_indices_dense_from_zero(self):
        chunks = run_segment(tokenize("A. B. C. D"))
        assert [c.index for c in chunks] == list(range(len(chunks)))

    def test_utterance_id_carried(self):
        chunks = run_segment(tokenize("Hi there."), utterance=7)
        assert all(c.utterance == 7 for c in chunks)


class TestLosslessFuzz:
    def test_thousand_random_streams_match_oracle(self):
        rng = random.Random(1234)
        alphabet = (
            string.ascii_letters + string.digits + " " * 10
            + "".join(SENTENCE_ENDERS) + "".join(COMMAS)
            + "我们怪哉"
        )
        for trial in range(1000):
            length = rng.randrange(0, 120)
            text = "".join(rng.choice(alphabet) for _ in range(length))
            # random token split, including empty tokens
            tokens = []
            i = 0
            while i < len(text):
                step = rng.randrange(1, 7)
                tokens.append(text[i : i + step])
                i += step
            if rng.random() < 0.2:
                tokens.insert(rng.randrange(0, len(tokens) + 1), "")
            min_chars = rng.choice([1, 4, 24])
            chunks = run_segment(tokens, min_chunk_chars=min_chars)
            assert "".join(c.text for c in chunks) == text
            assert [c.text for c in chunks] == segment_oracle(text, min_chars)
            for chunk in chunks[:-1]:
                assert chunk.text[-1] in SENTENCE_ENDERS | COMMAS
            for chunk in chunks:
                assert chunk.text != ""
