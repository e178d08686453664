"""Generator/verifier dialogue protocol.

A transcript is a numbered sequence of moves. The generator proposes
arguments, optionally naming the argument each one attacks. The verifier
either poses a critical question against an argument (rejecting it or
letting it pass) or accepts it.

Legality rules checked by :func:`is_legal`:

* the session is active and below its move limit; indices run 1, 2, 3...;
* proposals come from the generator, questions and acceptances from the
  verifier;
* argument ids are fresh, attack targets were proposed earlier;
* at most ``max_decisions`` decision proposals;
* alternation: a proposal attacking the latest generator proposal needs a
  verifier rejection of it in between, and whenever proposals ``i`` and
  ``i+2`` stand in an attack, move ``i+1`` is the verifier's;
* open rejections are answered newest first: while one is open the next
  proposal must attack its target;
* the verifier poses at most one question per turn, never questions an
  accepted argument and never accepts one with an open rejection.

An acceptance closes a round. The session terminates when it reaches its
move limit, when an acceptance leaves nothing open and no further decision
may be proposed, or when the orchestrator calls :func:`close_session`.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

from .aaf import Argument, ArgumentationFramework, ArgumentId
from .errors import (
    IllegalMove,
    IllegalMoveAt,
    InvalidConfig,
    SessionActive,
    SessionTerminated,
)

DEFAULT_DIALOGUE_LIMIT = 8
DEFAULT_MAX_DECISIONS = 4


class Speaker(str, enum.Enum):
    GENERATOR = "generator"
    VERIFIER = "verifier"


@dataclass(frozen=True)
class ProposeArgument:
    argument: Argument
    attacks_target: ArgumentId | None = None


@dataclass(frozen=True)
class PoseCQ:
    cq_id: str
    target: ArgumentId
    rejected: bool = True
    reason: str = ""


@dataclass(frozen=True)
class AcceptArgument:
    target: ArgumentId


Payload = Union[ProposeArgument, PoseCQ, AcceptArgument]

_PAYLOAD_TYPES = {ProposeArgument: "propose", PoseCQ: "pose_cq", AcceptArgument: "accept"}
_EXPECTED_SPEAKER = {
    ProposeArgument: Speaker.GENERATOR,
    PoseCQ: Speaker.VERIFIER,
    AcceptArgument: Speaker.VERIFIER,
}


@dataclass(frozen=True)
class Move:
    index: int
    speaker: Speaker
    payload: Payload

    def to_dict(self) -> dict:
        p = self.payload
        d: dict = {"index": self.index, "speaker": Speaker(self.speaker).value,
                   "type": _PAYLOAD_TYPES[type(p)]}
        if isinstance(p, ProposeArgument):
            d["argument"] = p.argument.to_dict()
            d["attacks_target"] = p.attacks_target
        elif isinstance(p, PoseCQ):
            d.update(cq_id=p.cq_id, target=p.target, rejected=p.rejected, reason=p.reason)
        else:
            d["target"] = p.target
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Move":
        kind = d["type"]
        if kind == "propose":
            payload: Payload = ProposeArgument(Argument.from_dict(d["argument"]), d.get("attacks_target"))
        elif kind == "pose_cq":
            payload = PoseCQ(d["cq_id"], d["target"], bool(d.get("rejected", True)), d.get("reason", ""))
        elif kind == "accept":
            payload = AcceptArgument(d["target"])
        else:
            raise ValueError(f"unknown move type {kind!r}")
        return cls(int(d["index"]), Speaker(d["speaker"]), payload)


def propose(index: int, argument: Argument, attacks: ArgumentId | None = None) -> Move:
    return Move(index, Speaker.GENERATOR, ProposeArgument(argument, attacks))


def reject(index: int, target: ArgumentId, cq_id: str, reason: str = "") -> Move:
    return Move(index, Speaker.VERIFIER, PoseCQ(cq_id, target, True, reason))


def accept(index: int, target: ArgumentId) -> Move:
    return Move(index, Speaker.VERIFIER, AcceptArgument(target))


@dataclass(frozen=True)
class SessionConfig:
    dialogue_limit: int = DEFAULT_DIALOGUE_LIMIT
    max_decisions: int = DEFAULT_MAX_DECISIONS

    def __post_init__(self) -> None:
        for name in ("dialogue_limit", "max_decisions"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise InvalidConfig(f"{name} must be a positive integer, got {v!r}")

    def to_dict(self) -> dict:
        return {"dialogue_limit": self.dialogue_limit, "max_decisions": self.max_decisions}


@dataclass(frozen=True)
class Legality:
    legal: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.legal


_OK = Legality(True)


@dataclass
class DialogueTranscript:
    config: SessionConfig = field(default_factory=SessionConfig)
    moves: list[Move] = field(default_factory=list)
    termination: str | None = None
    # derived state, kept in step with ``moves`` by submit_move
    _proposals: dict[ArgumentId, int] = field(default_factory=dict, repr=False)
    _arguments: dict[ArgumentId, Argument] = field(default_factory=dict, repr=False)
    _accepted: set[ArgumentId] = field(default_factory=set, repr=False)
    _examined: set[ArgumentId] = field(default_factory=set, repr=False)
    _open: list[ArgumentId] = field(default_factory=list, repr=False)
    _last_rejection: dict[ArgumentId, int] = field(default_factory=dict, repr=False)
    _decisions: int = field(default=0, repr=False)

    @property
    def active(self) -> bool:
        return self.termination is None

    @property
    def status(self) -> str:
        return "active" if self.active else f"terminated({self.termination})"

    @property
    def decision_count(self) -> int:
        return self._decisions

    @property
    def open_rejections(self) -> list[ArgumentId]:
        return list(self._open)

    @property
    def pending(self) -> list[ArgumentId]:
        """Proposed arguments the verifier has not looked at yet."""
        return [a for a in self._proposals if a not in self._examined]

    @property
    def accepted(self) -> set[ArgumentId]:
        return set(self._accepted)

    def argument(self, arg_id: ArgumentId) -> Argument:
        return self._arguments[arg_id]

    @property
    def proposals(self) -> list[tuple[Move, ProposeArgument]]:
        return [(m, m.payload) for m in self.moves if isinstance(m.payload, ProposeArgument)]

    def last_generator_proposal(self) -> ArgumentId | None:
        for m in reversed(self.moves):
            if isinstance(m.payload, ProposeArgument):
                return m.payload.argument.id
        return None

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "moves": [m.to_dict() for m in self.moves],
            "status": {"state": "active" if self.active else "terminated",
                       "reason": self.termination},
        }


def new_session(config: SessionConfig | None = None) -> DialogueTranscript:
    return DialogueTranscript(config or SessionConfig())


def _verifier_turn_has_question(t: DialogueTranscript) -> bool:
    for m in reversed(t.moves):
        if m.speaker != Speaker.VERIFIER:
            return False
        if isinstance(m.payload, PoseCQ):
            return True
    return False


def is_legal(t: DialogueTranscript, m: Move) -> Legality:
    if not t.active:
        return Legality(False, f"session terminated ({t.termination})")
    if len(t.moves) >= t.config.dialogue_limit:
        return Legality(False, f"dialogue limit of {t.config.dialogue_limit} reached")
    if m.index != len(t.moves) + 1:
        return Legality(False, f"expected move index {len(t.moves) + 1}, got {m.index}")
    p = m.payload
    expected = _EXPECTED_SPEAKER.get(type(p))
    if expected is None:
        return Legality(False, f"unknown payload {type(p).__name__}")
    if m.speaker != expected:
        return Legality(False, f"{_PAYLOAD_TYPES[type(p)]} must come from the {expected.value}")

    if isinstance(p, ProposeArgument):
        arg, target = p.argument, p.attacks_target
        if arg.id in t._proposals:
            return Legality(False, f"argument {arg.id} was already proposed")
        if target is not None and target not in t._proposals:
            return Legality(False, f"attack target {target} was never proposed")
        if arg.is_decision and t._decisions >= t.config.max_decisions:
            return Legality(False, f"decision cap of {t.config.max_decisions} reached")
        if target is not None:
            latest = t.last_generator_proposal()
            if target == latest and t._last_rejection.get(target, 0) <= t._proposals[target]:
                return Legality(False, f"attacking {target} needs an intervening verifier rejection")
            if (len(t.moves) >= 2 and t._proposals[target] == len(t.moves) - 1
                    and t.moves[-1].speaker != Speaker.VERIFIER):
                return Legality(False, f"attacking {target} two moves later needs a verifier move in between")
        if t._open and target != t._open[-1]:
            return Legality(False, f"must answer the open rejection of {t._open[-1]} first")
        return _OK

    target = p.target
    if target not in t._proposals:
        return Legality(False, f"target {target} was never proposed")
    if target in t._accepted:
        return Legality(False, f"argument {target} was already accepted")
    if isinstance(p, PoseCQ):
        if _verifier_turn_has_question(t):
            return Legality(False, "only one critical question per verifier turn")
        return _OK
    if target in t._open:
        return Legality(False, f"argument {target} has an open rejection")
    return _OK


def submit_move(t: DialogueTranscript, m: Move) -> DialogueTranscript:
    if not t.active:
        raise SessionTerminated(f"session terminated ({t.termination})")
    verdict = is_legal(t, m)
    if not verdict:
        raise IllegalMove(verdict.reason)
    t.moves.append(m)
    p = m.payload
    if isinstance(p, ProposeArgument):
        t._proposals[p.argument.id] = m.index
        t._arguments[p.argument.id] = p.argument
        if p.argument.is_decision:
            t._decisions += 1
        if t._open and p.attacks_target == t._open[-1]:
            t._open.pop()
    elif isinstance(p, PoseCQ):
        t._examined.add(p.target)
        if p.rejected:
            t._open.append(p.target)
            t._last_rejection[p.target] = m.index
    else:
        t._examined.add(p.target)
        t._accepted.add(p.target)

    if len(t.moves) >= t.config.dialogue_limit:
        t.termination = "limit"
    elif (isinstance(p, AcceptArgument) and not t._open and not t.pending
          and t._decisions >= t.config.max_decisions):
        t.termination = "accepted"
    return t


def close_session(t: DialogueTranscript, reason: str = "exhausted") -> DialogueTranscript:
    if not t.active:
        raise SessionTerminated(f"session terminated ({t.termination})")
    t.termination = reason
    return t


def replay(moves: Iterable[Move], config: SessionConfig | None = None,
           termination: str | None = None) -> DialogueTranscript:
    """Rebuild a transcript move by move. ``termination`` closes it afterwards if still active."""
    t = new_session(config)
    for pos, m in enumerate(moves, start=1):
        try:
            submit_move(t, m)
        except IllegalMove as e:
            raise IllegalMoveAt(pos, e.reason) from None
        except SessionTerminated as e:
            raise IllegalMoveAt(pos, str(e)) from None
    if termination is not None and t.active:
        close_session(t, termination)
    return t


def alternation_holds(moves: list[Move]) -> bool:
    """Proposals at ``i`` and ``i+2`` with the later attacking the earlier have a verifier move at ``i+1``."""
    for i in range(len(moves) - 2):
        a, mid, b = moves[i], moves[i + 1], moves[i + 2]
        if (isinstance(a.payload, ProposeArgument) and isinstance(b.payload, ProposeArgument)
                and b.payload.attacks_target == a.payload.argument.id
                and mid.speaker != Speaker.VERIFIER):
            return False
    return True


def to_framework(t: DialogueTranscript) -> ArgumentationFramework:
    if t.active:
        raise SessionActive("transcript is still active; close it before compiling")
    fw = ArgumentationFramework()
    for _, p in t.proposals:
        fw.add_argument(p.argument)
    for _, p in t.proposals:
        if p.attacks_target is not None:
            fw.add_attack(p.argument.id, p.attacks_target)
    return fw


def transcript_from_dict(doc: dict) -> DialogueTranscript:
    cfg = SessionConfig(**doc.get("config", {}))
    moves = [Move.from_dict(d) for d in doc.get("moves", [])]
    status = doc.get("status") or {}
    termination = status.get("reason") if status.get("state") == "terminated" else None
    return replay(moves, cfg, termination)


def dump_transcript(t: DialogueTranscript) -> str:
    return json.dumps(t.to_dict(), indent=2, ensure_ascii=False) + "\n"


def load_transcript(path: str | Path) -> DialogueTranscript:
    return transcript_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
