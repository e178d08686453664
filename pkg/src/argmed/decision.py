"""Decision reports: optional decisions, explanation sets and the error flag.

A decision is *optional* when some preferred extension contains it. Each
preferred extension holding a decision is an explanation set for it; since
distinct decisions attack each other, such a set holds exactly one.

When no decision is optional the report raises ``error_flag``. A framework
without any decision is flagged as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import semantics
from .aaf import ArgumentationFramework, ArgumentId, validate
from .errors import ConsistencyError, InvalidFramework

SEMANTICS = ("preferred", "grounded")


@dataclass(frozen=True, order=True)
class ExplanationSet:
    decision: ArgumentId
    supporters: tuple[ArgumentId, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "supporters", tuple(sorted(set(self.supporters))))

    @property
    def full_set(self) -> tuple[ArgumentId, ...]:
        return tuple(sorted({self.decision, *self.supporters}))

    def to_dict(self) -> dict:
        return {"decision": self.decision, "supporters": list(self.supporters)}


@dataclass(frozen=True)
class DecisionReport:
    optional_decisions: tuple[ArgumentId, ...]
    explanation_sets: tuple[ExplanationSet, ...]
    error_flag: bool
    error_note: str | None = None
    decisions: tuple[ArgumentId, ...] = ()
    semantics: str = "preferred"
    exclusive: bool = False
    belief_only_extensions: tuple[tuple[ArgumentId, ...], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "optional_decisions": list(self.optional_decisions),
            "explanation_sets": [e.to_dict() for e in self.explanation_sets],
            "error_flag": self.error_flag,
            "error_note": self.error_note,
            "decisions": list(self.decisions),
            "semantics": self.semantics,
            "exclusive": self.exclusive,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionReport":
        return cls(
            optional_decisions=tuple(d["optional_decisions"]),
            explanation_sets=tuple(
                ExplanationSet(e["decision"], tuple(e["supporters"]))
                for e in d["explanation_sets"]
            ),
            error_flag=bool(d["error_flag"]),
            error_note=d.get("error_note"),
            decisions=tuple(d.get("decisions", ())),
            semantics=d.get("semantics", "preferred"),
            exclusive=bool(d.get("exclusive", False)),
        )


def _require_valid(fw: ArgumentationFramework) -> None:
    report = validate(fw)
    if not report.ok:
        raise InvalidFramework(
            "framework violates typing rules: "
            + "; ".join(v.message for v in report.violations),
            report,
        )


def _extensions(fw: ArgumentationFramework, sem: str) -> list[semantics.Extension]:
    if sem == "preferred":
        return semantics.preferred_extensions(fw)
    if sem == "grounded":
        return [semantics.grounded_extension(fw)]
    raise ValueError(f"unknown semantics {sem!r}; expected one of {SEMANTICS}")


def _split(fw: ArgumentationFramework, exts) -> tuple[list[ExplanationSet], list[semantics.Extension]]:
    decisions = set(fw.decisions)
    sets, belief_only = [], []
    for e in exts:
        ds = [a for a in e if a in decisions]
        if not ds:
            belief_only.append(e)
            continue
        if len(ds) > 1:
            raise ConsistencyError(f"extension {e!r} holds several decisions: {ds}")
        sets.append(ExplanationSet(ds[0], tuple(a for a in e if a != ds[0])))
    return sorted(sets, key=lambda s: s.full_set), belief_only


def optional_decisions(fw: ArgumentationFramework, sem: str = "preferred") -> list[ArgumentId]:
    _require_valid(fw)
    sets, _ = _split(fw, _extensions(fw, sem))
    return sorted({s.decision for s in sets})


def explanation_sets(fw: ArgumentationFramework, sem: str = "preferred") -> list[ExplanationSet]:
    _require_valid(fw)
    sets, _ = _split(fw, _extensions(fw, sem))
    return sets


def _error_note(fw: ArgumentationFramework, exts, belief_only) -> str:
    if not fw.decisions:
        note = "no decision arguments in the framework"
    else:
        accepted = {a for e in exts for a in e}
        parts = []
        for d in fw.decisions:
            if fw.has_attack(d, d):
                parts.append(f"{d} attacks itself")
                continue
            blockers = [b for b in fw.attackers(d) if b in accepted]
            if blockers:
                parts.append(f"{d} defeated by {', '.join(blockers)}")
            else:
                parts.append(f"{d} has no admissible defence")
        note = "no acceptable decision: " + "; ".join(parts)
    if belief_only:
        note += ". Coherent beliefs: " + " | ".join(
            "{" + ", ".join(e.members) + "}" for e in belief_only
        )
    return note


def detect_reasoning_error(fw: ArgumentationFramework, sem: str = "preferred") -> DecisionReport:
    """Solve ``fw`` and flag the case when no decision is acceptable."""
    _require_valid(fw)
    exts = _extensions(fw, sem)
    sets, belief_only = _split(fw, exts)
    optional = tuple(sorted({s.decision for s in sets}))
    flagged = not optional
    return DecisionReport(
        optional_decisions=optional,
        explanation_sets=tuple(sets),
        error_flag=flagged,
        error_note=_error_note(fw, exts, belief_only) if flagged else None,
        decisions=tuple(fw.decisions),
        semantics=sem,
        belief_only_extensions=tuple(e.members for e in belief_only),
    )


def exclusivity_filter(report: DecisionReport) -> DecisionReport:
    """Check that no explanation set bundles two decisions and mark the sets as alternatives."""
    decisions = set(report.decisions)
    for s in report.explanation_sets:
        extra = sorted(decisions.intersection(s.supporters))
        if extra or (decisions and s.decision not in decisions):
            raise ConsistencyError(
                f"explanation set for {s.decision} also contains decision(s) {extra}"
            )
    missing = set(report.optional_decisions) - {s.decision for s in report.explanation_sets}
    if missing:
        raise ConsistencyError(f"optional decisions without explanation: {sorted(missing)}")
    if report.error_flag != (not report.optional_decisions):
        raise ConsistencyError("error_flag disagrees with the optional decision list")
    return replace(report, exclusive=True)


def format_report(report: DecisionReport) -> str:
    lines = []
    opt = " or ".join(report.optional_decisions) or "none"
    lines.append(f"Optional decisions: {opt}")
    sets = ", ".join("{" + ",".join(s.full_set) + "}" for s in report.explanation_sets)
    lines.append(f"Explanation sets: {{{sets}}}")
    if report.exclusive and len(report.explanation_sets) > 1:
        lines.append("Sets are mutually exclusive alternatives, not a joint plan.")
    lines.append(f"Reasoning error: {'yes' if report.error_flag else 'no'}")
    if report.error_note:
        lines.append(f"Note: {report.error_note}")
    return "\n".join(lines) + "\n"
