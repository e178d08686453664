"""Prompt templates. The defaults ship in ``argmed/data/prompts``; pass another directory to override."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..schemes import SchemeRegistry

ROLES = ("generator", "verifier")


def describe_schemes(registry: SchemeRegistry) -> str:
    lines = []
    for s in registry:
        lines.append(f"- {s.id} ({s.produces_kind.value}): {s.name}")
        lines.append(f"  variables: {', '.join(s.variables)}")
        for p in s.premise_templates:
            lines.append(f"  premise: {p}")
        lines.append(f"  conclusion: {s.conclusion_template}")
    return "\n".join(lines)


@dataclass
class PromptSet:
    system: dict[str, str]
    tasks: dict[str, str]
    examples: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, directory: str | Path | None = None) -> "PromptSet":
        root = Path(directory) if directory else resources.files("argmed").joinpath("data/prompts")
        system = {r: root.joinpath(f"{r}.txt").read_text(encoding="utf-8") for r in ROLES}
        tasks = json.loads(root.joinpath("tasks.json").read_text(encoding="utf-8"))
        examples = {}
        for r in ROLES:
            f = root.joinpath(f"{r}_examples.txt")
            if f.is_file():
                examples[r] = f.read_text(encoding="utf-8")
        return cls(system, tasks, examples)

    def system_prompt(self, role: str, registry: SchemeRegistry) -> str:
        shots = self.examples.get(role, "")
        return self.system[role].format(
            schemes=describe_schemes(registry),
            examples=f"\nExamples:\n{shots}\n" if shots else "",
        )

    def task(self, name: str, **values) -> str:
        return self.tasks[name].format(**values)
