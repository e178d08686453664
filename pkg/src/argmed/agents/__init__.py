"""Generator, verifier and reasoner orchestration over pluggable backends."""

from .backends import (
    AgentBackend,
    BackendConfig,
    RecordedBackend,
    RecordingBackend,
    RemoteBackend,
    ScriptedBackend,
    make_backends,
    remote_backend,
    scripted_backend,
)
from .orchestrator import (
    SessionOutcome,
    argument_label,
    generator_step,
    load_case,
    run_case,
    verifier_step,
    write_bundle,
)
from .parsing import (
    CQVerdict,
    NewArgument,
    ParsedResponse,
    Stop,
    Unparseable,
    argument_reply,
    envelope,
    parse_response,
    stop_reply,
    verdict_reply,
)
from .prompts import PromptSet

__all__ = [
    "AgentBackend", "BackendConfig", "CQVerdict", "NewArgument", "ParsedResponse",
    "PromptSet", "RecordedBackend", "RecordingBackend", "RemoteBackend", "ScriptedBackend",
    "SessionOutcome", "Stop", "Unparseable", "argument_label", "argument_reply", "envelope", "generator_step",
    "load_case", "make_backends", "parse_response", "remote_backend", "run_case",
    "scripted_backend", "stop_reply", "verdict_reply", "verifier_step", "write_bundle",
]
