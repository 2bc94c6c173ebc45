"""Operator command line: ingest corpora, drill, report, serve.

Flags win over ``CORPUS_TUTOR_*`` environment fallbacks.  Exit codes:
0 success, 1 validation/application failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import Optional

from . import sample_corpus_text, sample_translit_text
from .errors import TutorError
from .eventlog import EventLog, load_events
from .exercise import ExerciseSpec, Kind, PARSING_KINDS
from .ingest import IngestReport, TranslitTable, parse_corpus
from .model import Corpus
from .service import Service, TokenAuth, make_server, _parse_week
from .stats import (
    GradeScale,
    Mode,
    PointsConfig,
    class_report,
    export_class,
    export_logbook,
    export_ranking,
    export_report_rows,
    logbook,
    ranking,
    task_report,
    test_report,
)


def _env(name: str, default: Optional[str] = None) -> Optional[str]:
    return os.environ.get(f"CORPUS_TUTOR_{name}", default)


def _load_corpus(path: Optional[str], translit: Optional[str]) -> Corpus:
    table = None
    translit = translit or _env("TRANSLIT")
    if translit:
        table = TranslitTable.parse(Path(translit).read_text("utf-8"))
    elif path is None:
        table = TranslitTable.parse(sample_translit_text())
    path = path or _env("CORPUS")
    text = Path(path).read_text("utf-8") if path else sample_corpus_text()
    corpus, report = parse_corpus(text, table)
    if corpus is None:
        for diag in report.errors:
            print(f"error\t{diag.line}\t{diag.rule}\t{diag.message}", file=sys.stderr)
        raise TutorError(f"corpus failed validation with {len(report.errors)} error(s)")
    return corpus


def _grade_scale(args) -> GradeScale:
    text = getattr(args, "grades", None) or _env("GRADES")
    return GradeScale.parse(text) if text else GradeScale()


def _points(args) -> PointsConfig:
    text = getattr(args, "points", None) or _env("POINTS")
    return PointsConfig.parse(text) if text else PointsConfig()


def _log_path(args) -> str:
    return getattr(args, "log", None) or _env("LOG") or "events.log"


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------


def _format_report(report: IngestReport) -> str:
    lines = [
        f"words\t{report.word_count}",
        f"phrases\t{report.phrase_count}",
        f"clauses\t{report.clause_count}",
        f"sentences\t{report.sentence_count}",
    ]
    for diag in report.errors:
        lines.append(f"error\t{diag.line}\t{diag.rule}\t{diag.message}")
    for diag in report.warnings:
        lines.append(f"warning\t{diag.line}\t{diag.rule}\t{diag.message}")
    return "\n".join(lines) + "\n"


def cmd_ingest(args) -> int:
    table = None
    if args.translit:
        table = TranslitTable.parse(Path(args.translit).read_text("utf-8"))
    _, report = parse_corpus(Path(args.corpus).read_text("utf-8"), table)
    text = _format_report(report)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# drill
# ---------------------------------------------------------------------------


def _parse_submission(kind: Kind, line: str, choices) -> object:
    if kind in PARSING_KINDS:
        parts = [p for chunk in line.split(",") for p in chunk.split() if p]
        features = {}
        for part in parts:
            key, sep, value = part.partition("=")
            if not sep:
                raise ValueError(f"parsing answers look like stem=qal, got {part!r}")
            features[key] = value
        return features
    text = line.strip()
    if choices and text.isdigit() and 1 <= int(text) <= len(choices):
        return choices[int(text) - 1]
    return text


def cmd_drill(args) -> int:
    corpus = _load_corpus(args.corpus, args.translit)
    spec = ExerciseSpec.from_text(Path(args.spec).read_text("utf-8"))
    log = EventLog(_log_path(args))
    service = Service(corpus, log, _grade_scale(args), _points(args))
    session = service.create_session(args.user, spec, args.seed)
    total = len(session.exercise.questions)
    print(f"# {spec.name} -- {total} questions (session {session.session_id})")
    while True:
        data = service.next_question(args.user, session.session_id)
        if data.get("done"):
            break
        print(f"[{data['index']}/{data['total']}] {data['prompt']}  ({data['prompt_translit']})")
        choices = data.get("choices")
        if choices:
            for i, option in enumerate(choices, start=1):
                print(f"  {i}. {option}")
        if data.get("asked_features"):
            print(f"  parse: {', '.join(data['asked_features'])}")
        started = time.monotonic()
        line = sys.stdin.readline()
        if not line:
            print("input closed; abandoning session", file=sys.stderr)
            return 1
        elapsed = args.elapsed_s or max(time.monotonic() - started, 1e-3)
        submission = _parse_submission(spec.kind, line.rstrip("\n"), choices)
        feedback = service.answer(
            args.user, session.session_id, data["id"], submission, elapsed
        )
        if feedback.overall:
            print("  correct")
        else:
            for name, verdict in sorted(feedback.per_feature.items()):
                mark = "ok" if verdict.correct else f"expected {verdict.expected}, got {verdict.got}"
                print(f"  {name}: {mark}")
    if args.mode:
        mode = Mode(args.mode)
    else:
        print("finish with [s]ave outcome or [g]rade task?")
        line = sys.stdin.readline().strip().lower()
        mode = Mode.GRADE_TASK if line.startswith("g") else Mode.SAVE_OUTCOME
    summary = service.finish(args.user, session.session_id, mode)
    print(
        "# session {session}: {c} correct, {w} wrong, duration {d}".format(
            session=session.session_id,
            c=summary.get("correct", "0"),
            w=summary.get("wrong", "0"),
            d=summary.get("duration", "00:00"),
        )
    )
    return 0


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def cmd_report(args) -> int:
    events = load_events(_log_path(args))
    scale = _grade_scale(args)
    points = _points(args)
    if args.kind == "logbook":
        sys.stdout.write(export_logbook(logbook(events, args.user)))
    elif args.kind == "ranking":
        sys.stdout.write(export_ranking(ranking(events, points)))
    elif args.kind == "class":
        weeks = [_parse_week(w) for w in args.weeks.split(",") if w]
        users = [u for u in (args.users or "").split(",") if u] or sorted(
            {e.user_id for e in events}
        )
        sys.stdout.write(export_class(class_report(events, users, weeks, scale)))
    elif args.kind == "tasks":
        sys.stdout.write(export_report_rows(task_report(events, args.user, scale)))
    elif args.kind == "tests":
        sys.stdout.write(export_report_rows(test_report(events, args.user, args.test, scale)))
    return 0


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def cmd_serve(args) -> int:
    corpus = _load_corpus(args.corpus, args.translit)
    auth_path = args.auth or _env("AUTH")
    if not auth_path:
        print("serve requires --auth tokens.tsv (token<TAB>user<TAB>role)", file=sys.stderr)
        return 2
    auth = TokenAuth.load(auth_path)
    log = EventLog(_log_path(args))
    service = Service(corpus, log, _grade_scale(args), _points(args))
    port = args.port if args.port is not None else int(_env("PORT", "8432"))
    server = make_server(service, auth, host=args.host, port=port)
    print(f"serving on http://{args.host}:{server.server_address[1]}/api/v1/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        log.close()
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpus-tutor",
        description="Corpus-driven language drills with oracle feedback and learner analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="parse and validate a corpus file")
    p_ingest.add_argument("corpus")
    p_ingest.add_argument("--translit", help="transliteration table file")
    p_ingest.add_argument("--report", help="also write the diagnostics to this file")
    p_ingest.set_defaults(func=cmd_ingest)

    p_drill = sub.add_parser("drill", help="terminal practice session")
    p_drill.add_argument("--spec", required=True, help=".spec file (key=value lines)")
    p_drill.add_argument("--seed", type=int, required=True)
    p_drill.add_argument("--user", default="local")
    p_drill.add_argument("--corpus", help="corpus file (default: shipped sample)")
    p_drill.add_argument("--translit")
    p_drill.add_argument("--log", help="event log path (default: events.log)")
    p_drill.add_argument("--mode", choices=[m.value for m in Mode], help="finish mode (skips the prompt)")
    p_drill.add_argument(
        "--elapsed-s", type=float, default=None,
        help="force a fixed per-question elapsed time (scripted runs)",
    )
    p_drill.add_argument("--grades")
    p_drill.add_argument("--points")
    p_drill.set_defaults(func=cmd_drill)

    p_report = sub.add_parser("report", help="emit facilitator reports as TSV")
    p_report.add_argument("kind", choices=["logbook", "ranking", "class", "tasks", "tests"])
    p_report.add_argument("--user", default="local")
    p_report.add_argument("--weeks", help="comma-separated YYYY-MM-DD boundaries (class)")
    p_report.add_argument("--users", help="comma-separated roster (class)")
    p_report.add_argument("--test", default="", help="test id prefix (tests)")
    p_report.add_argument("--log")
    p_report.add_argument("--grades")
    p_report.add_argument("--points")
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--corpus")
    p_serve.add_argument("--translit")
    p_serve.add_argument("--log")
    p_serve.add_argument("--auth", help="token file: token<TAB>user<TAB>role")
    p_serve.add_argument("--grades")
    p_serve.add_argument("--points")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "report":
        if args.kind == "class" and not args.weeks:
            parser.error("report class requires --weeks")
        if args.kind == "tests" and not args.test:
            parser.error("report tests requires --test")
    try:
        return args.func(args)
    except TutorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
