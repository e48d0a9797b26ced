"""Streaming chat-completion gateway with retries, cache busting, and a mock."""

from .client import (
    ChatBackend,
    ChatClient,
    ChatRequest,
    Done,
    GatewayError,
    HttpChatBackend,
    StreamError,
    Token,
    TokenEvent,
    cache_bust,
    request_payload,
)
from .mock import MockChatBackend, option_following_script, tokenize

__all__ = [
    "ChatBackend",
    "ChatClient",
    "ChatRequest",
    "Done",
    "GatewayError",
    "HttpChatBackend",
    "MockChatBackend",
    "StreamError",
    "Token",
    "TokenEvent",
    "cache_bust",
    "option_following_script",
    "request_payload",
    "tokenize",
]
