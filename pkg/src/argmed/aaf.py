"""Typed abstract argumentation frameworks.

Arguments are either decisions (candidate treatments) or beliefs (evidence
that may undermine a decision). Two structural rules hold in a well-formed
framework:

* distinct decisions attack each other in both directions;
* a decision never attacks a belief.

The mutators enforce both rules. :meth:`ArgumentationFramework.from_parts`
builds a framework verbatim (used by the file readers) so that
:func:`validate` can report what a hand-written file got wrong.
"""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import DuplicateId, ForbiddenAttack, UnknownArgument

ArgumentId = str


class ArgumentKind(str, enum.Enum):
    DECISION = "decision"
    BELIEF = "belief"

    @classmethod
    def parse(cls, value: "str | ArgumentKind") -> "ArgumentKind":
        if isinstance(value, ArgumentKind):
            return value
        return cls(str(value).strip().lower())


@dataclass(frozen=True, eq=True)
class Argument:
    id: ArgumentId
    kind: ArgumentKind
    conclusion: str = ""
    premises: tuple[str, ...] = ()
    scheme_id: str | None = None
    bindings: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("argument id must be a non-empty string")
        object.__setattr__(self, "kind", ArgumentKind.parse(self.kind))
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "bindings", dict(self.bindings))
        if not self.conclusion:
            # bare graph formats carry no text; the id stands in for it
            object.__setattr__(self, "conclusion", self.id)

    @property
    def is_decision(self) -> bool:
        return self.kind is ArgumentKind.DECISION

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "premises": list(self.premises),
            "conclusion": self.conclusion,
            "scheme_id": self.scheme_id,
            "bindings": dict(sorted(self.bindings.items())),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Argument":
        return cls(
            id=d["id"],
            kind=ArgumentKind.parse(d.get("kind", "belief")),
            conclusion=d.get("conclusion") or "",
            premises=tuple(d.get("premises") or ()),
            scheme_id=d.get("scheme_id"),
            bindings=dict(d.get("bindings") or {}),
        )


def decision(id: ArgumentId, conclusion: str = "", **kw) -> Argument:
    return Argument(id, ArgumentKind.DECISION, conclusion, **kw)


def belief(id: ArgumentId, conclusion: str = "", **kw) -> Argument:
    return Argument(id, ArgumentKind.BELIEF, conclusion, **kw)


Attack = tuple[ArgumentId, ArgumentId]


class ArgumentationFramework:
    """Arguments keyed by id plus a set of ``(attacker, target)`` pairs."""

    def __init__(self) -> None:
        self._args: dict[ArgumentId, Argument] = {}
        self._attacks: set[Attack] = set()

    @classmethod
    def from_parts(cls, arguments: Iterable[Argument], attacks: Iterable[Attack]) -> "ArgumentationFramework":
        """Build without enforcing the typing rules. Duplicate ids still raise."""
        fw = cls()
        for arg in arguments:
            if arg.id in fw._args:
                raise DuplicateId(f"duplicate argument id {arg.id!r}")
            fw._args[arg.id] = arg
        fw._attacks = {(str(a), str(b)) for a, b in attacks}
        return fw

    # -- queries --------------------------------------------------------

    def __contains__(self, arg_id: object) -> bool:
        return arg_id in self._args

    def __len__(self) -> int:
        return len(self._args)

    def __iter__(self) -> Iterator[Argument]:
        return iter(self.arguments)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArgumentationFramework):
            return NotImplemented
        return self._args == other._args and self._attacks == other._attacks

    def __repr__(self) -> str:
        return f"ArgumentationFramework(|A|={len(self._args)}, |R|={len(self._attacks)})"

    @property
    def ids(self) -> list[ArgumentId]:
        return sorted(self._args)

    @property
    def arguments(self) -> list[Argument]:
        return [self._args[i] for i in self.ids]

    @property
    def attacks(self) -> list[Attack]:
        return sorted(self._attacks)

    @property
    def decisions(self) -> list[ArgumentId]:
        return [i for i in self.ids if self._args[i].is_decision]

    @property
    def beliefs(self) -> list[ArgumentId]:
        return [i for i in self.ids if not self._args[i].is_decision]

    def argument(self, arg_id: ArgumentId) -> Argument:
        try:
            return self._args[arg_id]
        except KeyError:
            raise UnknownArgument(f"unknown argument {arg_id!r}") from None

    def kind(self, arg_id: ArgumentId) -> ArgumentKind:
        return self.argument(arg_id).kind

    def has_attack(self, attacker: ArgumentId, target: ArgumentId) -> bool:
        return (attacker, target) in self._attacks

    def attackers(self, arg_id: ArgumentId) -> list[ArgumentId]:
        self.argument(arg_id)
        return sorted(a for a, b in self._attacks if b == arg_id)

    def targets(self, arg_id: ArgumentId) -> list[ArgumentId]:
        self.argument(arg_id)
        return sorted(b for a, b in self._attacks if a == arg_id)

    def attacker_map(self) -> dict[ArgumentId, set[ArgumentId]]:
        out: dict[ArgumentId, set[ArgumentId]] = {i: set() for i in self._args}
        for a, b in self._attacks:
            if b in out:
                out[b].add(a)
        return out

    def target_map(self) -> dict[ArgumentId, set[ArgumentId]]:
        out: dict[ArgumentId, set[ArgumentId]] = {i: set() for i in self._args}
        for a, b in self._attacks:
            if a in out:
                out[a].add(b)
        return out

    def check_ids(self, ids: Iterable[ArgumentId]) -> frozenset[ArgumentId]:
        s = frozenset(ids)
        missing = sorted(s - self._args.keys())
        if missing:
            raise UnknownArgument(f"unknown argument(s): {', '.join(missing)}")
        return s

    # -- mutation -------------------------------------------------------

    def add_argument(self, arg: Argument) -> ArgumentId:
        """Register ``arg``; a new decision gets mutual attacks with every existing one."""
        if arg.id in self._args:
            raise DuplicateId(f"duplicate argument id {arg.id!r}")
        if arg.is_decision:
            for other in self.decisions:
                self._attacks.add((arg.id, other))
                self._attacks.add((other, arg.id))
        self._args[arg.id] = arg
        return arg.id

    def add_attack(self, attacker: ArgumentId, target: ArgumentId) -> None:
        a = self.argument(attacker)
        b = self.argument(target)
        if a.is_decision and not b.is_decision:
            raise ForbiddenAttack(
                f"decision {attacker!r} may not attack belief {target!r}"
            )
        self._attacks.add((attacker, target))

    def complete_decision_attacks(self) -> int:
        """Insert any missing decision-decision attacks. Returns how many were added."""
        before = len(self._attacks)
        ds = self.decisions
        for x in ds:
            for y in ds:
                if x != y:
                    self._attacks.add((x, y))
        return len(self._attacks) - before

    def copy(self) -> "ArgumentationFramework":
        return copy.deepcopy(self)

    def restricted_to(self, ids: Iterable[ArgumentId]) -> "ArgumentationFramework":
        keep = self.check_ids(ids)
        return ArgumentationFramework.from_parts(
            (self._args[i] for i in sorted(keep)),
            ((a, b) for a, b in self._attacks if a in keep and b in keep),
        )

    def validate(self) -> "ValidationReport":
        return validate(self)


def new_framework() -> ArgumentationFramework:
    return ArgumentationFramework()


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    edge: Attack | None = None


MISSING_MUTUAL_ATTACK = "missing_mutual_attack"
FORBIDDEN_ATTACK = "forbidden_attack"
DANGLING_ENDPOINT = "dangling_endpoint"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [
                {"code": v.code, "message": v.message, "edge": list(v.edge) if v.edge else None}
                for v in self.violations
            ],
            "warnings": list(self.warnings),
        }


def validate(fw: ArgumentationFramework) -> ValidationReport:
    report = ValidationReport()
    args = fw._args
    for a, b in sorted(fw._attacks):
        missing = [x for x in (a, b) if x not in args]
        if missing:
            report.violations.append(Violation(
                DANGLING_ENDPOINT,
                f"attack ({a},{b}) refers to unknown argument(s) {', '.join(missing)}",
                (a, b),
            ))
            continue
        if args[a].is_decision and not args[b].is_decision:
            report.violations.append(Violation(
                FORBIDDEN_ATTACK,
                f"forbidden attack: decision {a} attacks belief {b}",
                (a, b),
            ))
        if a == b:
            report.warnings.append(f"self-attack on {a}")
    ds = fw.decisions
    for x in ds:
        for y in ds:
            if x != y and (x, y) not in fw._attacks:
                report.violations.append(Violation(
                    MISSING_MUTUAL_ATTACK,
                    f"missing mutual attack: decision {x} does not attack decision {y}",
                    (x, y),
                ))
    return report
