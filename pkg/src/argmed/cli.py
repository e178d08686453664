"""``argmed`` command line."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import dialogue as dlg
from .aaf import ArgumentationFramework, validate
from .decision import (
    SEMANTICS,
    detect_reasoning_error,
    exclusivity_filter,
    format_report,
)
from .dot import BELIEF_COLOR, DECISION_COLOR, to_dot
from .errors import ArgmedError, BackendFailure, IllegalMoveAt, InvalidFramework
from .formats import dumps_json, load_framework
from .schemes import builtin_schemes, load_schemes
from .semantics import brute_force_preferred, preferred_extensions

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REASONING_ERROR = 2
EXIT_SESSION_FAILED = 3

log = logging.getLogger("argmed")

EPILOG = """\
exit codes:
  0  success; at least one decision is acceptable
  1  usage, input or validation error
  2  reasoning error detected: no decision is acceptable
  3  agent session failed (backend, parse or protocol); partial bundle kept

environment:
  ARGMED_API_KEY        default credential variable for remote backends
                        (choose another name with "api_key_env" in the config)
  ARGMED_DISABLE_NUMBA  set to 1 to use the numpy kernels instead of numba
"""


class _Usage(Exception):
    pass


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str, fmt: str | None, complete: bool = False) -> ArgumentationFramework:
    if not Path(path).is_file():
        raise _Usage(f"no such file: {path}")
    fw = load_framework(path, fmt)
    if complete:
        fw.complete_decision_attacks()
    return fw


def _report_exit(report) -> int:
    return EXIT_REASONING_ERROR if report.error_flag else EXIT_OK


# -- subcommands ----------------------------------------------------------

def cmd_solve(args) -> int:
    fw = _load(args.file, args.input_format, args.complete)
    check = validate(fw)
    if not check.ok:
        for v in check.violations:
            print(f"{args.file}: {v.message}", file=sys.stderr)
        return EXIT_INPUT
    for w in check.warnings:
        log.warning("%s: %s", args.file, w)
    if args.oracle:
        if len(fw) > args.oracle_cap:
            raise _Usage(f"--oracle needs at most {args.oracle_cap} arguments, got {len(fw)}")
        fast, slow = preferred_extensions(fw), brute_force_preferred(fw, cap=args.oracle_cap)
        if fast != slow:
            print(f"solver/oracle mismatch: {fast} vs {slow}", file=sys.stderr)
            return EXIT_INPUT
    report = exclusivity_filter(detect_reasoning_error(fw, args.semantics))
    if args.format == "json":
        _emit(dumps_json(report.to_dict()), args.output)
    else:
        _emit(format_report(report), args.output)
    return _report_exit(report)


def cmd_validate(args) -> int:
    fw = _load(args.file, args.input_format)
    report = validate(fw)
    if args.format == "json":
        sys.stdout.write(dumps_json(report.to_dict()))
    else:
        for v in report.violations:
            print(f"violation: {v.message}")
        for w in report.warnings:
            print(f"warning: {w}")
        print("valid" if report.ok else f"invalid ({len(report.violations)} violation(s))")
    return EXIT_OK if report.ok else EXIT_INPUT


def _session_config(args) -> dlg.SessionConfig:
    return dlg.SessionConfig(args.dialogue_limit, args.max_decisions)


def _run_one(case_path: str, args, registry, prompts):
    from .agents import BackendConfig, load_case, make_backends, run_case, write_bundle

    cfg = BackendConfig.load(args.backend_config)
    pair = make_backends(cfg)
    case_id, text = load_case(case_path)
    try:
        outcome = run_case(text, pair.generator, pair.verifier, registry,
                           _session_config(args), case_id, prompts)
    except BackendFailure as e:
        if e.outcome is not None:
            write_bundle(e.outcome, args.out_dir)
        return case_id, None, f"backend failure: {e}"
    write_bundle(outcome, args.out_dir)
    return case_id, outcome, None


def cmd_run(args) -> int:
    from .agents import PromptSet

    if not args.backend_config:
        raise _Usage("run needs --backend-config")
    if not Path(args.backend_config).is_file():
        raise _Usage(f"no such backend config: {args.backend_config}")
    for c in args.cases:
        if not Path(c).is_file():
            raise _Usage(f"no such case file: {c}")
    registry = load_schemes(args.schemes) if args.schemes else builtin_schemes()
    prompts = PromptSet.load(args.prompts)
    workers = max(1, args.parallel)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda c: _run_one(c, args, registry, prompts), args.cases))
    else:
        results = [_run_one(c, args, registry, prompts) for c in args.cases]
    code = EXIT_OK
    for case_id, outcome, failure in results:
        if failure:
            print(f"[{case_id}] {failure}", file=sys.stderr)
            code = max(code, EXIT_SESSION_FAILED)
            continue
        t = outcome.transcript
        print(f"[{case_id}] {len(t.moves)} moves, {t.status}")
        sys.stdout.write(format_report(outcome.report))
        if t.termination in ("parse", "protocol"):
            code = max(code, EXIT_SESSION_FAILED)
        elif outcome.report.error_flag:
            code = max(code, EXIT_REASONING_ERROR)
    return code


def cmd_replay(args) -> int:
    try:
        t = dlg.load_transcript(args.transcript)
    except IllegalMoveAt as e:
        print(f"{args.transcript}: illegal move {e.index}: {e.reason}", file=sys.stderr)
        return EXIT_INPUT
    if t.active:
        dlg.close_session(t, "replayed")
    fw = dlg.to_framework(t)
    report = exclusivity_filter(detect_reasoning_error(fw))
    if args.out_dir:
        from .agents import SessionOutcome, write_bundle
        write_bundle(SessionOutcome(Path(args.transcript).name.split(".")[0], t, fw, report), args.out_dir)
    if args.format == "json":
        sys.stdout.write(dumps_json(report.to_dict()))
    else:
        print(f"{len(t.moves)} moves replayed, {t.status}")
        sys.stdout.write(format_report(report))
    return _report_exit(report)


def _export_source(path: Path, fmt: str | None):
    if path.is_dir():
        found = sorted(path.glob("*.transcript.json"))
        if not found:
            raise _Usage(f"{path} holds no *.transcript.json")
        path = found[0]
    if path.suffix.lower() == ".json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(doc, dict) and "moves" in doc:
            t = dlg.transcript_from_dict(doc)
            if t.active:
                dlg.close_session(t, "replayed")
            index = {m.payload.argument.id: m.index for m, _ in t.proposals}
            return dlg.to_framework(t), index
    if not path.is_file():
        raise _Usage(f"no such file: {path}")
    return load_framework(path, fmt), None


def cmd_export(args) -> int:
    fw, index = _export_source(Path(args.input), args.input_format)
    _emit(to_dot(fw, index, args.decision_color, args.belief_color), args.output)
    return EXIT_OK


def cmd_schemes(args) -> int:
    registry = load_schemes(args.schemes) if args.schemes else builtin_schemes()
    if args.format == "json":
        sys.stdout.write(dumps_json(registry.to_dict()))
        return EXIT_OK
    for s in registry:
        print(f"{s.id} [{s.produces_kind.value}] {s.name}")
        print(f"  variables: {', '.join(s.variables)}")
        for p in s.premise_templates:
            print(f"  premise: {p}")
        print(f"  conclusion: {s.conclusion_template}")
        for cq in s.critical_questions:
            counter = f" -> {cq.on_reject_scheme}" if cq.on_reject_scheme else ""
            print(f"  {cq.id}{counter}: {cq.text_template}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="argmed",
        description="Argumentation-based clinical decision reasoning.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def framework_input(sp):
        sp.add_argument("--input-format", choices=("apx", "json"),
                        help="input format (default: by file extension)")

    sp = sub.add_parser("solve", help="solve a framework file and report decisions")
    sp.add_argument("file")
    framework_input(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--semantics", choices=SEMANTICS, default="preferred")
    sp.add_argument("--oracle", action="store_true", help="cross-check against exhaustive search")
    sp.add_argument("--oracle-cap", type=int, default=16)
    sp.add_argument("--complete", action="store_true",
                    help="insert missing decision-decision attacks before validating")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("validate", help="check a framework against the typing rules")
    sp.add_argument("file")
    framework_input(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("run", help="run agent sessions on case files")
    sp.add_argument("cases", nargs="+")
    sp.add_argument("--backend-config", help="backend config JSON")
    sp.add_argument("--out-dir", default="argmed-out")
    sp.add_argument("--schemes", help="scheme pack JSON (default: built-in)")
    sp.add_argument("--prompts", help="prompt template directory (default: built-in)")
    sp.add_argument("--dialogue-limit", type=int, default=dlg.DEFAULT_DIALOGUE_LIMIT)
    sp.add_argument("--max-decisions", type=int, default=dlg.DEFAULT_MAX_DECISIONS)
    sp.add_argument("--parallel", type=int, default=1, help="number of cases run at once")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("replay", help="re-check a transcript and solve it")
    sp.add_argument("transcript")
    sp.add_argument("--out-dir")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("export", help="write a framework, transcript or bundle as DOT")
    sp.add_argument("input")
    framework_input(sp)
    sp.add_argument("-o", "--output")
    sp.add_argument("--decision-color", default=DECISION_COLOR)
    sp.add_argument("--belief-color", default=BELIEF_COLOR)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("schemes", help="list argumentation schemes and critical questions")
    sp.add_argument("--schemes", help="scheme pack JSON (default: built-in)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_schemes)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; 2 is reserved for the reasoning-error signal
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _Usage as e:
        parser.print_usage(sys.stderr)
        print(f"argmed: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidFramework as e:
        print(f"argmed: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ArgmedError, OSError, json.JSONDecodeError) as e:
        print(f"argmed: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
