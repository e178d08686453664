"""Graphviz DOT rendering of frameworks."""

from __future__ import annotations

from typing import Mapping

from .aaf import ArgumentationFramework

DECISION_COLOR = "#e06666"
BELIEF_COLOR = "#ffd966"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(fw: ArgumentationFramework, move_index: Mapping[str, int] | None = None,
           decision_color: str = DECISION_COLOR, belief_color: str = BELIEF_COLOR,
           name: str = "argmed") -> str:
    """One node per argument (decisions boxed, beliefs as ellipses), one edge per attack."""
    lines = [f"digraph {_quote(name)} {{", "  node [style=filled];"]
    for a in fw.arguments:
        label = a.id
        if move_index and a.id in move_index:
            label += f" (move {move_index[a.id]})"
        attrs = {
            "label": label,
            "tooltip": a.conclusion,
            "class": a.kind.value,
            "shape": "box" if a.is_decision else "ellipse",
            "fillcolor": decision_color if a.is_decision else belief_color,
        }
        if move_index and a.id in move_index:
            attrs["move"] = str(move_index[a.id])
        body = ", ".join(f"{k}={_quote(v)}" for k, v in attrs.items())
        lines.append(f"  {_quote(a.id)} [{body}];")
    for x, y in fw.attacks:
        lines.append(f"  {_quote(x)} -> {_quote(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
