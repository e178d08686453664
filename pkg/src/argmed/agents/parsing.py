"""Turning backend text into protocol-level responses.

Prompts ask for exactly one fenced JSON block::

    ```json
    {"type": "argument", "scheme": "ASDM", "bindings": {...}, "attacks": "A"}
    ```

with ``type`` one of ``argument``, ``verdict`` or ``stop``. Anything else
parses to :class:`Unparseable`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import IncompleteBinding, UnknownScheme
from ..schemes import SchemeRegistry

_FENCE = re.compile(r"```[ \t]*(?:json|argmed)?[ \t]*\r?\n(.*?)```", re.DOTALL | re.IGNORECASE)


@dataclass(frozen=True)
class NewArgument:
    scheme_id: str
    bindings: dict[str, str] = field(default_factory=dict)
    attacks_target: str | None = None


@dataclass(frozen=True)
class CQVerdict:
    cq_id: str | None
    rejected: bool
    reason: str = ""


@dataclass(frozen=True)
class Stop:
    """The generator has nothing further to propose."""

    reason: str = ""


@dataclass(frozen=True)
class Unparseable:
    raw_text: str
    diagnostic: str


ParsedResponse = Union[NewArgument, CQVerdict, Stop, Unparseable]


def _as_bool(v) -> bool | None:
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v.strip().lower() in ("true", "false", "yes", "no"):
        return v.strip().lower() in ("true", "yes")
    return None


def parse_response(raw: str, registry: SchemeRegistry | None = None) -> ParsedResponse:
    """Parse ``raw``; with a ``registry``, argument bindings are also checked for totality."""
    blocks = _FENCE.findall(raw or "")
    if not blocks:
        return Unparseable(raw, "no fenced json block found")
    if len(blocks) > 1:
        return Unparseable(raw, f"expected one fenced block, found {len(blocks)}")
    try:
        doc = json.loads(blocks[0])
    except json.JSONDecodeError as e:
        return Unparseable(raw, f"invalid json in block: {e.msg} (line {e.lineno})")
    if not isinstance(doc, dict):
        return Unparseable(raw, "block must hold a json object")
    kind = doc.get("type")

    if kind == "argument":
        scheme = doc.get("scheme")
        bindings = doc.get("bindings")
        if not isinstance(scheme, str) or not scheme:
            return Unparseable(raw, "argument needs a 'scheme' string")
        if not isinstance(bindings, dict):
            return Unparseable(raw, "argument needs a 'bindings' object")
        target = doc.get("attacks")
        if target is not None and not isinstance(target, str):
            return Unparseable(raw, "'attacks' must be an argument id or null")
        bindings = {str(k): str(v) for k, v in bindings.items()}
        if registry is not None:
            try:
                registry.instantiate(scheme, bindings, "_")
            except (UnknownScheme, IncompleteBinding) as e:
                return Unparseable(raw, str(e))
        return NewArgument(scheme, bindings, target or None)

    if kind == "verdict":
        rejected = _as_bool(doc.get("rejected"))
        if rejected is None:
            return Unparseable(raw, "verdict needs a boolean 'rejected'")
        cq = doc.get("cq")
        return CQVerdict(str(cq) if cq is not None else None, rejected, str(doc.get("reason") or ""))

    if kind == "stop":
        return Stop(str(doc.get("reason") or ""))

    return Unparseable(raw, f"unknown type {kind!r}; expected argument, verdict or stop")


def envelope(doc: dict) -> str:
    """Wrap ``doc`` the way prompts ask backends to reply. Handy for scripts."""
    return "```json\n" + json.dumps(doc, ensure_ascii=False) + "\n```"


def argument_reply(scheme: str, bindings: dict, attacks: str | None = None) -> str:
    return envelope({"type": "argument", "scheme": scheme, "bindings": bindings, "attacks": attacks})


def verdict_reply(cq: str | None, rejected: bool, reason: str = "") -> str:
    return envelope({"type": "verdict", "cq": cq, "rejected": rejected, "reason": reason})


def stop_reply(reason: str = "") -> str:
    return envelope({"type": "stop", "reason": reason})
