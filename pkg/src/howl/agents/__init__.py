"""Agents: prompt building, reply parsing, backends, and elicitation."""

from .aliases import AliasMap
from .elicit import (
    AgentBackend,
    AgentBinding,
    BackendUnreachable,
    ElicitResult,
    FALLBACK_STATEMENT,
    HumanAgent,
    LlmAgent,
    ReplySource,
    ScriptedAgent,
    elicit,
    fallback_action,
)
from .parser import ParsedReply, ParseFailure, parse_reply, view_legal_actions
from .policies import POLICIES
from .prompts import (
    PromptContext,
    Task,
    build_prompt,
    default_templates,
    format_instructions_for,
    load_templates,
    render_history,
)

__all__ = [
    "POLICIES",
    "AgentBackend",
    "AgentBinding",
    "AliasMap",
    "BackendUnreachable",
    "ElicitResult",
    "FALLBACK_STATEMENT",
    "HumanAgent",
    "LlmAgent",
    "ParseFailure",
    "ParsedReply",
    "PromptContext",
    "ReplySource",
    "ScriptedAgent",
    "Task",
    "build_prompt",
    "default_templates",
    "elicit",
    "fallback_action",
    "format_instructions_for",
    "load_templates",
    "parse_reply",
    "render_history",
    "view_legal_actions",
]
