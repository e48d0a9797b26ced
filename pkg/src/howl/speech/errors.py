"""Speech pipeline error types."""


class TtsError(Exception):
    """TTS backend failure; synthesis substitutes silence rather than raising."""


class VoiceError(Exception):
    """Unknown or unregistered voice; rejected at session start."""
