"""Argumentation schemes, critical questions and their instantiation.

A scheme is a premise/conclusion template over named variables. Templates
use single-brace placeholders (``{treatment}``); write ``{{`` and ``}}``
for literal braces.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .aaf import Argument, ArgumentId, ArgumentKind
from .errors import (
    DuplicateScheme,
    IncompleteBinding,
    MalformedTemplate,
    UnknownScheme,
)

Binding = Mapping[str, str]

_formatter = string.Formatter()


def placeholders(template: str) -> list[str]:
    """Placeholder names in ``template``, in order of appearance."""
    names = []
    try:
        parsed = list(_formatter.parse(template))
    except ValueError as e:
        raise MalformedTemplate(f"{template!r}: {e}") from None
    for _, name, spec, conv in parsed:
        if name is None:
            continue
        if not name.isidentifier() or spec or conv:
            raise MalformedTemplate(
                f"{template!r}: placeholder {{{name}}} must be a bare identifier"
            )
        names.append(name)
    return names


def render(template: str, binding: Binding) -> str:
    return template.format_map(dict(binding))


@dataclass(frozen=True)
class CriticalQuestion:
    id: str
    scheme_id: str
    text_template: str
    on_reject_scheme: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text_template": self.text_template,
            "on_reject_scheme": self.on_reject_scheme,
        }


@dataclass(frozen=True)
class Scheme:
    id: str
    premise_templates: tuple[str, ...]
    conclusion_template: str
    variables: tuple[str, ...]
    produces_kind: ArgumentKind
    name: str = ""
    critical_questions: tuple[CriticalQuestion, ...] = field(default=())

    def check(self) -> None:
        if not self.premise_templates:
            raise MalformedTemplate(f"scheme {self.id}: needs at least one premise template")
        if not self.conclusion_template.strip():
            raise MalformedTemplate(f"scheme {self.id}: empty conclusion template")
        declared = set(self.variables)
        templates = [*self.premise_templates, self.conclusion_template]
        templates += [cq.text_template for cq in self.critical_questions]
        for t in templates:
            undeclared = sorted(set(placeholders(t)) - declared)
            if undeclared:
                raise MalformedTemplate(
                    f"scheme {self.id}: placeholder(s) {undeclared} not among variables {sorted(declared)}"
                )
        for cq in self.critical_questions:
            if cq.scheme_id != self.id:
                raise MalformedTemplate(f"critical question {cq.id} belongs to {cq.scheme_id}, not {self.id}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "produces_kind": self.produces_kind.value,
            "variables": list(self.variables),
            "premise_templates": list(self.premise_templates),
            "conclusion_template": self.conclusion_template,
            "critical_questions": [cq.to_dict() for cq in self.critical_questions],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Scheme":
        sid = d["id"]
        return cls(
            id=sid,
            name=d.get("name", ""),
            produces_kind=ArgumentKind.parse(d["produces_kind"]),
            variables=tuple(d["variables"]),
            premise_templates=tuple(d["premise_templates"]),
            conclusion_template=d["conclusion_template"],
            critical_questions=tuple(
                CriticalQuestion(
                    id=q["id"],
                    scheme_id=sid,
                    text_template=q["text_template"],
                    on_reject_scheme=q.get("on_reject_scheme"),
                )
                for q in d.get("critical_questions", ())
            ),
        )


class SchemeRegistry:
    """Schemes by id. Built once, then only read."""

    def __init__(self, schemes: Iterable[Scheme] = ()):
        self._schemes: dict[str, Scheme] = {}
        for s in schemes:
            self.register(s)

    def __contains__(self, scheme_id: object) -> bool:
        return scheme_id in self._schemes

    def __iter__(self):
        return iter(self._schemes.values())

    def __len__(self) -> int:
        return len(self._schemes)

    @property
    def ids(self) -> list[str]:
        return list(self._schemes)

    def register(self, scheme: Scheme) -> None:
        if scheme.id in self._schemes:
            raise DuplicateScheme(f"scheme {scheme.id!r} already registered")
        scheme.check()
        self._schemes[scheme.id] = scheme

    def get(self, scheme_id: str) -> Scheme:
        try:
            return self._schemes[scheme_id]
        except KeyError:
            raise UnknownScheme(f"unknown scheme {scheme_id!r}") from None

    def check_references(self) -> None:
        for s in self:
            for cq in s.critical_questions:
                if cq.on_reject_scheme is not None and cq.on_reject_scheme not in self:
                    raise UnknownScheme(
                        f"critical question {cq.id} names unknown counter-scheme {cq.on_reject_scheme!r}"
                    )

    def question(self, cq_id: str) -> CriticalQuestion:
        for s in self:
            for cq in s.critical_questions:
                if cq.id == cq_id:
                    return cq
        raise KeyError(f"unknown critical question {cq_id!r}")

    def _complete(self, scheme: Scheme, binding: Binding) -> dict[str, str]:
        missing = [v for v in scheme.variables if not str(binding.get(v, "")).strip()]
        if missing:
            raise IncompleteBinding(f"scheme {scheme.id}: no value for {', '.join(missing)}")
        return {v: str(binding[v]) for v in scheme.variables}

    def instantiate(self, scheme_id: str, binding: Binding, arg_id: ArgumentId) -> Argument:
        scheme = self.get(scheme_id)
        values = self._complete(scheme, binding)
        return Argument(
            id=arg_id,
            kind=scheme.produces_kind,
            premises=tuple(render(t, values) for t in scheme.premise_templates),
            conclusion=render(scheme.conclusion_template, values),
            scheme_id=scheme.id,
            bindings=values,
        )

    def critical_questions_for(self, scheme_id: str, binding: Binding) -> list[str]:
        scheme = self.get(scheme_id)
        values = self._complete(scheme, binding)
        return [render(cq.text_template, values) for cq in scheme.critical_questions]

    def to_dict(self) -> dict:
        return {"schemes": [s.to_dict() for s in self]}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SchemeRegistry":
        reg = cls(Scheme.from_dict(d) for d in doc["schemes"])
        reg.check_references()
        return reg


def load_schemes(path: str | Path) -> SchemeRegistry:
    return SchemeRegistry.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def builtin_schemes() -> SchemeRegistry:
    """Registry loaded from the packaged default pack (ASDM, ASSE, ASDA)."""
    text = resources.files("argmed").joinpath("data/schemes.json").read_text(encoding="utf-8")
    return SchemeRegistry.from_dict(json.loads(text))
