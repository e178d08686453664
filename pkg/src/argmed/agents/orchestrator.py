"""Drives a generator/verifier session and solves the resulting framework.

The reasoner role is this module plus the symbolic solver: it records every
move, compiles the transcript into a framework and hands that to
:func:`argmed.decision.detect_reasoning_error`.
"""

from __future__ import annotations

import json
import logging
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .. import dialogue as dlg
from ..aaf import Argument, ArgumentationFramework
from ..decision import DecisionReport, detect_reasoning_error, exclusivity_filter
from ..errors import BackendFailure, ParseFailure
from ..formats import dump_json, dumps_json
from ..schemes import SchemeRegistry, builtin_schemes, render
from .backends import AgentBackend, Message
from .parsing import CQVerdict, NewArgument, ParsedResponse, Stop, Unparseable, parse_response
from .prompts import PromptSet

log = logging.getLogger(__name__)

DECISION_SCHEME = "ASDM"


@dataclass
class SessionOutcome:
    case_id: str
    transcript: dlg.DialogueTranscript
    framework: ArgumentationFramework
    report: DecisionReport

    def bundle_files(self) -> dict[str, str]:
        return {
            f"{self.case_id}.transcript.json": dlg.dump_transcript(self.transcript),
            f"{self.case_id}.framework.json": dump_json(self.framework),
            f"{self.case_id}.report.json": dumps_json(self.report.to_dict()),
        }


def write_bundle(outcome: SessionOutcome, out_dir: str | Path) -> Path:
    target = Path(out_dir) / outcome.case_id
    target.mkdir(parents=True, exist_ok=True)
    for name, text in outcome.bundle_files().items():
        (target / name).write_text(text, encoding="utf-8")
    return target


def argument_label(n: int) -> str:
    """0 -> A, 25 -> Z, 26 -> AA ..."""
    letters = string.ascii_uppercase
    out = ""
    n += 1
    while n:
        n, r = divmod(n - 1, 26)
        out = letters[r] + out
    return out


def _ask(backend: AgentBackend, role: str, context: Sequence[Message], instruction: str,
         prompts: PromptSet, registry: SchemeRegistry, expect: tuple[type, ...]) -> ParsedResponse:
    """One call plus at most one reprompt carrying the parser's diagnostic."""
    resp = parse_response(backend.complete(role, context, instruction), registry)
    for attempt in range(2):
        if not isinstance(resp, Unparseable) and not isinstance(resp, expect):
            resp = Unparseable("", f"unexpected reply type {type(resp).__name__}")
        if not isinstance(resp, Unparseable):
            return resp
        if attempt == 1:
            break
        retry = prompts.task("reprompt", instruction=instruction, diagnostic=resp.diagnostic)
        resp = parse_response(backend.complete(role, context, retry), registry)
    raise ParseFailure(f"{role} reply unusable twice: {resp.diagnostic}", resp.raw_text)


def generator_step(backend: AgentBackend, context: Sequence[Message], instruction: str,
                   registry: SchemeRegistry | None = None, prompts: PromptSet | None = None) -> ParsedResponse:
    registry = registry or builtin_schemes()
    prompts = prompts or PromptSet.load()
    return _ask(backend, "generator", context, instruction, prompts, registry, (NewArgument, Stop))


def verifier_step(backend: AgentBackend, argument: Argument, registry: SchemeRegistry | None = None,
                  context: Sequence[Message] = (), prompts: PromptSet | None = None) -> CQVerdict:
    """Ask each critical question of the argument's scheme in order; stop at the first rejection.

    Returns the rejecting verdict, or a passing verdict when nothing was
    rejected (``cq_id`` is then the last question asked, or ``None``).
    """
    registry = registry or builtin_schemes()
    prompts = prompts or PromptSet.load()
    if argument.scheme_id is None or argument.scheme_id not in registry:
        return CQVerdict(None, False, "no critical questions")
    scheme = registry.get(argument.scheme_id)
    texts = registry.critical_questions_for(scheme.id, argument.bindings)
    last = None
    for cq, text in zip(scheme.critical_questions, texts):
        instruction = prompts.task(
            "question", target=argument.id, scheme_id=scheme.id,
            premises="\n".join(f"- {p}" for p in argument.premises),
            conclusion=argument.conclusion, cq_id=cq.id, cq_text=text,
        )
        verdict = _ask(backend, "verifier", context, instruction, prompts, registry, (CQVerdict,))
        last = cq.id
        if verdict.rejected:
            return CQVerdict(cq.id, True, verdict.reason)
    return CQVerdict(last, False, "all critical questions answered" if last else "no critical questions")


def _render_transcript(t: dlg.DialogueTranscript) -> str:
    lines = []
    for m in t.moves:
        p = m.payload
        if isinstance(p, dlg.ProposeArgument):
            a = p.argument
            att = f", attacks {p.attacks_target}" if p.attacks_target else ""
            lines.append(f"{m.index}. generator: {a.id} [{a.kind.value}, {a.scheme_id}{att}] {a.conclusion}")
        elif isinstance(p, dlg.PoseCQ):
            verdict = "rejected" if p.rejected else "passed"
            lines.append(f"{m.index}. verifier: {p.cq_id} on {p.target} {verdict}. {p.reason}".rstrip())
        else:
            lines.append(f"{m.index}. verifier: accepted {p.target}")
    return "\n".join(lines) or "(no moves yet)"


class _Session:
    def __init__(self, case_id, case_text, generator, verifier, registry, config, prompts):
        self.case_id = case_id
        self.case_text = case_text
        self.generator = generator
        self.verifier = verifier
        self.registry = registry
        self.prompts = prompts
        self.t = dlg.new_session(config)
        self.rejections: dict[str, CQVerdict] = {}

    def context(self, role: str) -> list[Message]:
        return [
            {"role": "system", "content": self.prompts.system_prompt(role, self.registry)},
            {"role": "user", "content": f"Case:\n{self.case_text}"},
            {"role": "user", "content": f"Discussion so far:\n{_render_transcript(self.t)}"},
        ]

    def next_index(self) -> int:
        return len(self.t.moves) + 1

    def verify(self, target: str) -> None:
        arg = self.t.argument(target)
        verdict = verifier_step(self.verifier, arg, self.registry, self.context("verifier"), self.prompts)
        if verdict.rejected:
            move = dlg.Move(self.next_index(), dlg.Speaker.VERIFIER,
                            dlg.PoseCQ(verdict.cq_id, target, True, verdict.reason))
            self.rejections[target] = verdict
        else:
            move = dlg.accept(self.next_index(), target)
        dlg.submit_move(self.t, move)

    def instruction(self) -> str:
        if self.t.open_rejections:
            target = self.t.open_rejections[-1]
            v = self.rejections[target]
            cq = self.registry.question(v.cq_id)
            cq_text = render(cq.text_template, self.t.argument(target).bindings)
            hint = f" using scheme {cq.on_reject_scheme}" if cq.on_reject_scheme else ""
            return self.prompts.task("counter", target=target, cq_id=cq.id, cq_text=cq_text,
                                     reason=v.reason or "none given", scheme_hint=hint)
        if not self.t.moves:
            return self.prompts.task("first_decision", decision_scheme=DECISION_SCHEME)
        args = ", ".join(f"{m.payload.argument.id} ({m.payload.argument.conclusion})"
                         for m, _ in self.t.proposals)
        return self.prompts.task("next_round", arguments=args)

    def _check(self, resp: NewArgument) -> tuple[dlg.Move | None, str]:
        arg = self.registry.instantiate(resp.scheme_id, resp.bindings, argument_label(len(self.t.proposals)))
        target = resp.attacks_target
        if target is None and self.t.open_rejections:
            target = self.t.open_rejections[-1]
        move = dlg.propose(self.next_index(), arg, target)
        verdict = dlg.is_legal(self.t, move)
        if not verdict:
            return None, verdict.reason
        if target is not None and arg.is_decision and not self.t.argument(target).is_decision:
            return None, f"a decision may not attack belief {target}"
        return move, ""

    def generate(self) -> bool:
        """One generator turn. Returns False when the session should close."""
        instruction = self.instruction()
        for attempt in range(2):
            resp = generator_step(self.generator, self.context("generator"), instruction,
                                  self.registry, self.prompts)
            if isinstance(resp, Stop):
                return False
            move, why = self._check(resp)
            if move is not None:
                dlg.submit_move(self.t, move)
                return True
            log.info("%s: generator proposal rejected by protocol: %s", self.case_id, why)
            instruction = self.prompts.task(
                "reprompt", instruction=self.instruction(),
                diagnostic=f"that move breaks the dialogue rules ({why})",
            )
        dlg.close_session(self.t, "protocol")
        return True

    def run(self) -> None:
        while self.t.active:
            if self.t.pending:
                self.verify(self.t.pending[0])
                continue
            if not self.t.open_rejections and self.t.decision_count >= self.t.config.max_decisions \
                    and self.t.moves:
                # cap reached and nothing to answer: only beliefs could follow, and none are owed
                dlg.close_session(self.t, "exhausted")
                break
            if not self.generate():
                dlg.close_session(self.t, "exhausted")

    def outcome(self) -> SessionOutcome:
        fw = dlg.to_framework(self.t)
        report = exclusivity_filter(detect_reasoning_error(fw))
        return SessionOutcome(self.case_id, self.t, fw, report)


def run_case(case_text: str, generator: AgentBackend, verifier: AgentBackend,
             registry: SchemeRegistry | None = None, config: dlg.SessionConfig | None = None,
             case_id: str = "case", prompts: PromptSet | None = None) -> SessionOutcome:
    """Run one full session and return transcript, framework and report.

    A parse failure after one reprompt ends the session with status
    ``parse``; an illegal proposal after one reprompt ends it with
    ``protocol``. Both still return an outcome built from the accepted
    moves. A :class:`BackendFailure` is re-raised with that partial outcome
    attached as ``outcome``.
    """
    s = _Session(case_id, case_text, generator, verifier, registry or builtin_schemes(),
                 config or dlg.SessionConfig(), prompts or PromptSet.load())
    try:
        s.run()
    except ParseFailure as e:
        log.warning("%s: %s", case_id, e)
        if s.t.active:
            dlg.close_session(s.t, "parse")
    except BackendFailure as e:
        if s.t.active:
            dlg.close_session(s.t, "backend")
        e.outcome = s.outcome()
        raise
    return s.outcome()


def load_case(path: str | Path) -> tuple[str, str]:
    """``(case_id, text)`` from a ``.json`` case (``case_id``, ``text``) or plain text file."""
    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        doc = json.loads(raw)
        return str(doc.get("case_id") or path.stem), doc["text"]
    return path.stem, raw
