"""Session lifecycle and the HTTP service the UI and CLI consume.

The Service class is the single implementation of the exercise lifecycle
(create session, issue questions, check answers, finish): the HTTP layer
and the terminal drill both drive it, so the two paths cannot diverge.
Answer checking is synchronous -- feedback is computed before the
response is written (the instant-feedback contract), with a desk-scale
latency budget of FEEDBACK_BUDGET_S per check.

Request bodies are plain ``key=value`` lines; responses use the versioned
payload encoding from :mod:`corpus_tutor.payload`.  Auth is bearer-token
with learner/facilitator roles read from a ``token<TAB>user<TAB>role``
file.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Callable, Mapping, Optional, Union
from urllib.parse import parse_qs, urlparse

from . import payload
from .errors import (
    AuthError,
    EmptyScopeError,
    InvertedRangeError,
    OutOfOrderError,
    ShapeMismatchError,
    TutorError,
    UnknownMonadError,
    UnknownReferenceError,
    UnknownSessionError,
)
from .eventlog import FINISH_MARKER, SCHEMA_VERSION, EventLog, EventRecord, practice_events
from .exercise import (
    Exercise,
    ExerciseSpec,
    Feedback,
    Question,
    build_history,
    check,
    generate,
)
from .model import Corpus, VerseRef, feature_bundle, text_slice
from .stats import (
    GradeScale,
    Mode,
    PointsConfig,
    class_report,
    format_duration,
    logbook,
    ranking,
    session_stats,
    task_report,
    test_report,
)

FEEDBACK_BUDGET_S = 0.050


# ---------------------------------------------------------------------------
# Auth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    user_id: str
    role: str  # "learner" | "facilitator"

    @property
    def is_facilitator(self) -> bool:
        return self.role == "facilitator"


class TokenAuth:
    def __init__(self, tokens: Mapping[str, Identity]) -> None:
        self.tokens = dict(tokens)

    @classmethod
    def parse(cls, text: str) -> "TokenAuth":
        tokens = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split("\t")
            if len(cells) != 3 or cells[2] not in ("learner", "facilitator"):
                raise ValueError(f"bad token line {raw!r}")
            tokens[cells[0]] = Identity(user_id=cells[1], role=cells[2])
        return cls(tokens)

    @classmethod
    def load(cls, path: str) -> "TokenAuth":
        return cls.parse(Path(path).read_text("utf-8"))

    def identify(self, header: Optional[str]) -> Identity:
        if not header or not header.startswith("Bearer "):
            raise AuthError("missing bearer token")
        token = header[len("Bearer ") :].strip()
        identity = self.tokens.get(token)
        if identity is None:
            raise AuthError("invalid token")
        return identity


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------


@dataclass
class SessionHandle:
    session_id: str
    user_id: str
    spec: ExerciseSpec
    seed: int
    exercise: Exercise
    cursor: int = 0
    finished: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def _question_payload(q: Question, index: int, total: int) -> dict:
    data: dict = {
        "id": q.id,
        "index": index + 1,
        "total": total,
        "kind": q.kind.value,
        "prompt": q.prompt,
        "prompt_translit": q.prompt_translit,
        "done": False,
    }
    if q.choices is not None:
        data["choices"] = list(q.choices)
    if q.asked_features:
        data["asked_features"] = list(q.asked_features)
    return data


def _feedback_payload(fb: Feedback) -> dict:
    return {
        "overall": fb.overall,
        "elapsed_s": fb.elapsed,
        "per_feature": [
            {
                "feature": name,
                "correct": verdict.correct,
                "expected": verdict.expected,
                "got": verdict.got,
            }
            for name, verdict in sorted(fb.per_feature.items())
        ],
    }


class Service:
    """Domain operations behind the API; shared by HTTP and the CLI drill."""

    def __init__(
        self,
        corpus: Corpus,
        log: EventLog,
        grade_scale: GradeScale = GradeScale(),
        points: PointsConfig = PointsConfig(),
        clock: Callable[[], datetime] = datetime.now,
    ) -> None:
        self.corpus = corpus
        self.log = log
        self.grade_scale = grade_scale
        self.points = points
        self.clock = clock
        self._sessions: dict[str, SessionHandle] = {}
        self._lock = threading.Lock()

    # -- corpus display ------------------------------------------------------

    def text_payload(self, from_text: str, to_text: str) -> dict:
        rows = text_slice(
            self.corpus, VerseRef.parse(from_text), VerseRef.parse(to_text)
        )
        return {
            "rows": [
                {
                    "clause": {
                        "id": row.clause.id,
                        "label": row.clause.label,
                        "ctc": row.clause.ctc,
                        "tab_depth": row.clause.tab_depth,
                        "mother_id": row.clause.mother_id,
                        "sentence_id": row.clause.sentence_id,
                    },
                    "words": [
                        feature_bundle(self.corpus, w.monad) for w in row.words
                    ],
                }
                for row in rows
            ]
        }

    # -- exercise lifecycle ---------------------------------------------------

    def create_session(self, user_id: str, spec: ExerciseSpec, seed: int) -> SessionHandle:
        """Generate the exercise (tailored by the user's error history)."""
        history = build_history(self.log.snapshot(user=user_id)) or None
        exercise = generate(spec, self.corpus, seed, history)
        with self._lock:
            count = self.log.session_count(user_id)
            count += sum(
                1 for s in self._sessions.values() if s.user_id == user_id
            )
            session = SessionHandle(
                session_id=f"{user_id}-s{count + 1}",
                user_id=user_id,
                spec=spec,
                seed=seed,
                exercise=exercise,
            )
            self._sessions[session.session_id] = session
        return session

    def _session(self, session_id: str, user_id: str) -> SessionHandle:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        if session.user_id != user_id:
            raise AuthError("session belongs to another user")
        return session

    def next_question(self, user_id: str, session_id: str) -> dict:
        session = self._session(session_id, user_id)
        with session.lock:
            if session.finished:
                raise OutOfOrderError("session already finished")
            total = len(session.exercise.questions)
            if session.cursor >= total:
                return {"done": True, "total": total}
            q = session.exercise.questions[session.cursor]
            return _question_payload(q, session.cursor, total)

    def answer(
        self,
        user_id: str,
        session_id: str,
        question_id: str,
        submission: Union[str, Mapping[str, object]],
        elapsed_s: float,
    ) -> Feedback:
        """Check, then durably log exactly one record, then return feedback."""
        session = self._session(session_id, user_id)
        if elapsed_s <= 0:
            raise ValueError("elapsed_s must be > 0")
        with session.lock:
            if session.finished:
                raise OutOfOrderError("session already finished")
            total = len(session.exercise.questions)
            if session.cursor >= total:
                raise OutOfOrderError("all questions already answered")
            question = session.exercise.questions[session.cursor]
            if question.id != question_id:
                raise OutOfOrderError(
                    f"expected answer for {question.id!r}, got {question_id!r}"
                )
            feedback = check(question, submission, elapsed_s)
            now = self.clock()
            self.log.append(
                EventRecord(
                    seq=0,
                    schema_version=SCHEMA_VERSION,
                    user_id=user_id,
                    session_id=session_id,
                    exercise_name=session.spec.name,
                    question_id=question.id,
                    started_at=now - timedelta(seconds=elapsed_s),
                    elapsed_s=elapsed_s,
                    correct=feedback.overall,
                    per_feature=tuple(
                        (name, verdict.correct)
                        for name, verdict in sorted(feedback.per_feature.items())
                    ),
                    mode=Mode.SAVE_OUTCOME,
                )
            )
            session.cursor += 1
            return feedback

    def finish(self, user_id: str, session_id: str, mode: Mode) -> dict:
        """Close the session, record the chosen mode, return its logbook row."""
        session = self._session(session_id, user_id)
        with session.lock:
            if session.finished:
                raise OutOfOrderError("session already finished")
            session.finished = True
            self.log.append(
                EventRecord(
                    seq=0,
                    schema_version=SCHEMA_VERSION,
                    user_id=user_id,
                    session_id=session_id,
                    exercise_name=session.spec.name,
                    question_id=FINISH_MARKER,
                    started_at=self.clock(),
                    elapsed_s=0.0,
                    correct=True,
                    per_feature=(),
                    mode=mode,
                )
            )
        events = [
            e
            for e in self.events()
            if e.session_id == session_id
        ]
        if not events:
            return {"session_id": session_id, "answered": 0}
        row = session_stats(events)
        return {"session_id": session_id, "answered": len(events), **row.rendered()}

    # -- statistics ------------------------------------------------------------

    def events(self):
        return practice_events(self.log.snapshot(include_finish=True))

    def logbook_payload(self, user: str) -> dict:
        rows = logbook(self.events(), user)
        return {"user": user, "rows": [r.rendered() for r in rows]}

    def ranking_payload(self) -> dict:
        rows = ranking(self.events(), self.points)
        return {
            "rows": [
                {"rank": r.rank, **r.totals.rendered()} for r in rows
            ]
        }

    def class_payload(self, weeks: list[datetime], users: Optional[list[str]]) -> dict:
        events = self.events()
        roster = users if users else sorted({e.user_id for e in events})
        report = class_report(events, roster, weeks, self.grade_scale)
        return {
            "weeks": [w.strftime("%Y-%m-%d") for w in weeks],
            "rows": [
                {
                    "user_id": user,
                    "cells": [
                        {
                            "grade": cell.grade,
                            "cumulative_time": format_duration(cell.cumulative_time_s),
                            "trend": cell.trend.value if cell.trend else None,
                        }
                        for cell in report[user]
                    ],
                }
                for user in roster
            ],
        }

    def tasks_payload(self, user: str) -> dict:
        rows = task_report(self.events(), user, self.grade_scale)
        return {"user": user, "rows": [r.rendered() for r in rows]}

    def tests_payload(self, user: str, test_id: str) -> dict:
        rows = test_report(self.events(), user, test_id, self.grade_scale)
        return {"user": user, "test": test_id, "rows": [r.rendered() for r in rows]}


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------

_SESSION_PATH = re.compile(r"^/api/v1/sessions/([^/]+)/(next|answer|finish)$")

_ERROR_STATUS: tuple[tuple[type, int], ...] = (
    (AuthError, 403),
    (UnknownSessionError, 404),
    (UnknownReferenceError, 404),
    (UnknownMonadError, 404),
    (OutOfOrderError, 409),
    (InvertedRangeError, 400),
    (EmptyScopeError, 400),
    (ShapeMismatchError, 400),
)


def parse_body(text: str) -> dict[str, str]:
    """Request bodies are plain key=value lines."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"bad body line {raw!r}")
        fields[key.strip()] = value
    return fields


def split_submission(fields: Mapping[str, str]) -> Union[str, dict[str, str]]:
    """``answer=...`` for string kinds, ``answer.<feature>=...`` for parsing."""
    if "answer" in fields:
        return fields["answer"]
    features = {
        key[len("answer.") :]: value
        for key, value in fields.items()
        if key.startswith("answer.")
    }
    if not features:
        raise ValueError("body carries no answer")
    return features


class ApiHandler(BaseHTTPRequestHandler):
    service: Service
    auth: TokenAuth
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- plumbing -----------------------------------------------------------

    def _send(self, status: int, kind: str, data: dict) -> None:
        body = payload.encode(kind, data).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "text/plain; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, message: str) -> None:
        self._send(status, "error", {"error": {"code": status, "message": message}})

    def _identity(self) -> Identity:
        return self.auth.identify(self.headers.get("Authorization"))

    def _body_fields(self) -> dict[str, str]:
        length = int(self.headers.get("Content-Length", "0"))
        return parse_body(self.rfile.read(length).decode("utf-8"))

    def _dispatch(self, method: str) -> None:
        try:
            identity = self._identity()
        except AuthError as exc:
            self._error(401, str(exc))
            return
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            self._route(method, url.path, query, identity)
        except TutorError as exc:
            for cls, status in _ERROR_STATUS:
                if isinstance(exc, cls):
                    self._error(status, str(exc))
                    return
            self._error(400, str(exc))
        except (ValueError, KeyError) as exc:
            self._error(400, str(exc))

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Authorization, Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- routing -------------------------------------------------------------

    def _route(
        self, method: str, path: str, query: dict[str, str], identity: Identity
    ) -> None:
        service = self.service
        if method == "GET" and path == "/api/v1/text":
            if "from" not in query or "to" not in query:
                raise ValueError("text requires from= and to=")
            self._send(200, "text_slice", service.text_payload(query["from"], query["to"]))
            return

        if method == "POST" and path == "/api/v1/sessions":
            fields = self._body_fields()
            seed = int(fields.pop("seed", "0"))
            spec = ExerciseSpec.from_text(
                "\n".join(f"{k}={v}" for k, v in fields.items())
            )
            session = service.create_session(identity.user_id, spec, seed)
            self._send(
                200,
                "session",
                {
                    "session_id": session.session_id,
                    "name": spec.name,
                    "question_count": len(session.exercise.questions),
                },
            )
            return

        match = _SESSION_PATH.match(path)
        if match:
            session_id, action = match.groups()
            if action == "next" and method == "GET":
                data = service.next_question(identity.user_id, session_id)
                self._send(200, "question", data)
                return
            if action == "answer" and method == "POST":
                fields = self._body_fields()
                if "question_id" not in fields:
                    raise ValueError("answer requires question_id")
                elapsed = float(fields.get("elapsed_s", "0") or "0")
                feedback = service.answer(
                    identity.user_id,
                    session_id,
                    fields["question_id"],
                    split_submission(fields),
                    elapsed,
                )
                self._send(200, "feedback", _feedback_payload(feedback))
                return
            if action == "finish" and method == "POST":
                mode = Mode(query.get("mode", Mode.SAVE_OUTCOME.value))
                self._send(
                    200,
                    "session_summary",
                    service.finish(identity.user_id, session_id, mode),
                )
                return

        if method == "GET" and path == "/api/v1/stats/logbook":
            user = query.get("user", identity.user_id)
            if not identity.is_facilitator and user != identity.user_id:
                raise AuthError("learners may only read their own logbook")
            self._send(200, "logbook", service.logbook_payload(user))
            return

        if method == "GET" and path == "/api/v1/stats/ranking":
            self._send(200, "ranking", service.ranking_payload())
            return

        if method == "GET" and path == "/api/v1/stats/class":
            if not identity.is_facilitator:
                raise AuthError("class reports are facilitator-only")
            if "weeks" not in query:
                raise ValueError("class requires weeks=d1,d2,...")
            weeks = [_parse_week(w) for w in query["weeks"].split(",") if w]
            users = [u for u in query.get("users", "").split(",") if u] or None
            self._send(200, "class_report", service.class_payload(weeks, users))
            return

        if method == "GET" and path == "/api/v1/stats/tasks":
            user = query.get("user", identity.user_id)
            if not identity.is_facilitator and user != identity.user_id:
                raise AuthError("learners may only read their own reports")
            self._send(200, "task_report", service.tasks_payload(user))
            return

        if method == "GET" and path == "/api/v1/stats/tests":
            user = query.get("user", identity.user_id)
            if not identity.is_facilitator and user != identity.user_id:
                raise AuthError("learners may only read their own reports")
            self._send(
                200, "test_report", service.tests_payload(user, query.get("test", ""))
            )
            return

        self._error(404, f"no route for {method} {path}")


def _parse_week(text: str) -> datetime:
    """Week boundaries are dates; the cut is the end of that day."""
    day = datetime.strptime(text.strip(), "%Y-%m-%d")
    return day.replace(hour=23, minute=59, second=59)


def make_server(
    service: Service, auth: TokenAuth, host: str = "127.0.0.1", port: int = 0
) -> ThreadingHTTPServer:
    handler = type("BoundApiHandler", (ApiHandler,), {"service": service, "auth": auth})
    return ThreadingHTTPServer((host, port), handler)
