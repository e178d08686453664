"""Reading and writing frameworks.

Two formats:

``apx``
    One fact per line: ``arg(A).``, ``att(A,B).`` and ``kind(A,decision).``.
    ``%`` and ``#`` start comments. Arguments without a recognised kind are
    read as beliefs and a warning is logged.

``json``
    ``{"arguments": [{id, kind, premises, conclusion, scheme_id, bindings}],
    "attacks": [[from, to], ...]}``.

Readers never enforce the typing rules; run :func:`argmed.aaf.validate`
on the result.
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path

from .aaf import Argument, ArgumentationFramework, ArgumentKind
from .errors import DuplicateId, FormatError

log = logging.getLogger(__name__)

_FACT = re.compile(r"^(?P<pred>arg|att|kind)\s*\(\s*(?P<args>[^()]*?)\s*\)\s*\.$")
_TOKEN = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-']*$")


def _split_comment(line: str) -> str:
    for mark in ("%", "#"):
        pos = line.find(mark)
        if pos >= 0:
            line = line[:pos]
    return line.strip()


def parse_apx(text: str, source: str | None = None) -> ArgumentationFramework:
    order: list[str] = []
    kinds: dict[str, ArgumentKind] = {}
    attacks: list[tuple[str, str]] = []
    declared: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _split_comment(raw)
        if not line:
            continue
        m = _FACT.match(line)
        if not m:
            raise FormatError(f"cannot parse {raw.strip()!r}", lineno, source)
        parts = [p.strip() for p in m["args"].split(",")]
        for p in parts:
            if not _TOKEN.match(p):
                raise FormatError(f"bad token {p!r}", lineno, source)
        pred = m["pred"]
        if pred == "arg":
            if len(parts) != 1:
                raise FormatError("arg/1 expects one argument", lineno, source)
            if parts[0] in declared:
                raise FormatError(
                    f"argument {parts[0]} already declared on line {declared[parts[0]]}",
                    lineno, source,
                )
            declared[parts[0]] = lineno
            order.append(parts[0])
        elif pred == "att":
            if len(parts) != 2:
                raise FormatError("att/2 expects two arguments", lineno, source)
            attacks.append((parts[0], parts[1]))
        else:
            if len(parts) != 2:
                raise FormatError("kind/2 expects two arguments", lineno, source)
            try:
                kinds[parts[0]] = ArgumentKind.parse(parts[1])
            except ValueError:
                log.warning("%s:%d: unknown kind %r for %s, reading as belief",
                            source or "<apx>", lineno, parts[1], parts[0])
                kinds[parts[0]] = ArgumentKind.BELIEF
    for name in set(kinds) - set(declared):
        log.warning("kind given for undeclared argument %s", name)
    args = []
    for name in order:
        kind = kinds.get(name)
        if kind is None:
            log.warning("no kind for %s, reading as belief", name)
            kind = ArgumentKind.BELIEF
        args.append(Argument(name, kind))
    return ArgumentationFramework.from_parts(args, attacks)


def dump_apx(fw: ArgumentationFramework) -> str:
    lines = [f"arg({a.id})." for a in fw.arguments]
    lines += [f"kind({a.id},{a.kind.value})." for a in fw.arguments]
    lines += [f"att({a},{b})." for a, b in fw.attacks]
    return "\n".join(lines) + "\n"


def framework_to_dict(fw: ArgumentationFramework) -> dict:
    return {
        "arguments": [a.to_dict() for a in fw.arguments],
        "attacks": [[a, b] for a, b in fw.attacks],
    }


def framework_from_dict(doc: dict, source: str | None = None) -> ArgumentationFramework:
    if not isinstance(doc, dict) or "arguments" not in doc:
        raise FormatError("expected an object with an 'arguments' array", source=source)
    args = []
    for i, d in enumerate(doc.get("arguments") or []):
        try:
            args.append(Argument.from_dict(d))
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"arguments[{i}]: {e}", source=source) from None
    attacks = []
    for i, pair in enumerate(doc.get("attacks") or []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise FormatError(f"attacks[{i}]: expected [from, to]", source=source)
        attacks.append((str(pair[0]), str(pair[1])))
    try:
        return ArgumentationFramework.from_parts(args, attacks)
    except DuplicateId as e:
        raise FormatError(str(e), source=source) from None


def dumps_json(doc: object) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dump_json(fw: ArgumentationFramework) -> str:
    return dumps_json(framework_to_dict(fw))


def parse_json(text: str, source: str | None = None) -> ArgumentationFramework:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno, source) from None
    return framework_from_dict(doc, source)


JSON_SUFFIXES = {".json"}


def guess_format(path: str | Path) -> str:
    return "json" if Path(path).suffix.lower() in JSON_SUFFIXES else "apx"


def load_framework(path: str | Path, fmt: str | None = None) -> ArgumentationFramework:
    path = Path(path)
    fmt = fmt or guess_format(path)
    text = path.read_text(encoding="utf-8")
    if fmt == "json":
        return parse_json(text, str(path))
    return parse_apx(text, str(path))


def save_framework(fw: ArgumentationFramework, path: str | Path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or guess_format(path)
    path.write_text(dump_json(fw) if fmt == "json" else dump_apx(fw), encoding="utf-8")
