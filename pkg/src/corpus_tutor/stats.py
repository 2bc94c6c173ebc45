"""Session statistics, grades, rankings, and facilitator reports.

Everything here is a pure function over practice-event lists; the event
log is the single source of truth and recomputation always reproduces
stored aggregates.  Display rendering is part of the contract: seconds-
per-right renders at one decimal, every other derived statistic at up to
two, half-up, trailing zeros trimmed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EmptySessionError, NoAnswersError


class Mode(str, enum.Enum):
    SAVE_OUTCOME = "save_outcome"
    GRADE_TASK = "grade_task"


@dataclass(frozen=True)
class PracticeEvent:
    user_id: str
    exercise_name: str
    question_id: str
    started_at: datetime
    elapsed: float
    correct: bool
    per_feature: Mapping[str, bool]
    mode: Mode
    session_id: str

    def __post_init__(self) -> None:
        if self.elapsed <= 0:
            raise ValueError("elapsed must be > 0")


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_stat(value: Optional[float], decimals: int = 2) -> str:
    """Half-up rounding to ``decimals`` places, trailing zeros trimmed."""
    if value is None:
        return "-"
    quantum = Decimal(1).scaleb(-decimals)
    text = str(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def format_duration(seconds: float) -> str:
    """``hh:mm:ss`` with unbounded, zero-padded hours (e.g. 116:12:54)."""
    total = int(round(seconds))
    h, rest = divmod(total, 3600)
    m, s = divmod(rest, 60)
    return f"{h:02d}:{m:02d}:{s:02d}"


def format_minsec(seconds: float) -> str:
    """``mm:ss`` used for per-session durations (e.g. 00:46, 01:05)."""
    total = int(round(seconds))
    m, s = divmod(total, 60)
    return f"{m:02d}:{s:02d}"


# ---------------------------------------------------------------------------
# Session statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SessionSummary:
    session_id: str
    exercise_name: str
    started_at: datetime
    duration_s: float
    correct: int
    wrong: int
    seconds_per_right: Optional[float]
    correct_per_minute: float
    accuracy: float
    proficiency: float
    mode: Mode

    def rendered(self) -> dict[str, str]:
        """The display strings; these are what reports and the UI show."""
        return {
            "exercise_name": self.exercise_name,
            "started_at": self.started_at.strftime("%Y-%m-%d %H:%M"),
            "duration": format_minsec(self.duration_s),
            "seconds_per_right": render_stat(self.seconds_per_right, 1),
            "correct": str(self.correct),
            "wrong": str(self.wrong),
            "correct_per_minute": render_stat(self.correct_per_minute),
            "accuracy": render_stat(self.accuracy),
            "proficiency": render_stat(self.proficiency),
            "mode": self.mode.value,
        }


def derive_session_stats(
    duration_s: float, correct: int, wrong: int
) -> tuple[Optional[float], float, float, float]:
    """The logbook formulas over (duration, correct, wrong).

    seconds_per_right = d/c (None when c = 0);
    correct_per_minute = fraction-correct per minute = (c/(c+w)) / (d/60);
    accuracy = (c+w)/w for w > 0, else c+w;
    proficiency = correct_per_minute * fraction-correct.
    """
    answered = correct + wrong
    if answered == 0:
        raise EmptySessionError("session has no answers")
    fraction = correct / answered
    spr = duration_s / correct if correct else None
    cpm = fraction / (duration_s / 60.0) if duration_s else 0.0
    accuracy = answered / wrong if wrong else float(answered)
    return spr, cpm, accuracy, cpm * fraction


def session_stats(events: Sequence[PracticeEvent]) -> SessionSummary:
    """Fold one session's events into its logbook row."""
    if not events:
        raise EmptySessionError("session has no events")
    names = {e.exercise_name for e in events}
    users = {e.user_id for e in events}
    sessions = {e.session_id for e in events}
    if len(names) > 1 or len(users) > 1 or len(sessions) > 1:
        raise ValueError("events of one session must share exercise, user and id")
    correct = sum(1 for e in events if e.correct)
    wrong = len(events) - correct
    duration = sum(e.elapsed for e in events)
    spr, cpm, accuracy, proficiency = derive_session_stats(duration, correct, wrong)
    return SessionSummary(
        session_id=events[0].session_id,
        exercise_name=events[0].exercise_name,
        started_at=min(e.started_at for e in events),
        duration_s=duration,
        correct=correct,
        wrong=wrong,
        seconds_per_right=spr,
        correct_per_minute=cpm,
        accuracy=accuracy,
        proficiency=proficiency,
        mode=events[-1].mode,
    )


# ---------------------------------------------------------------------------
# Percentages and grades
# ---------------------------------------------------------------------------


def percent(correct: int, wrong: int) -> float:
    if correct + wrong <= 0:
        raise NoAnswersError("no answers to grade")
    return 100.0 * correct / (correct + wrong)


#: Grade ladder, worst to best; trend comparison happens on ladder indexes.
GRADE_LADDER = ("F", "D-", "D", "D+", "C-", "C", "C+", "B-", "B", "B+", "A-", "A")


@dataclass(frozen=True)
class GradeScale:
    """Descending percentage thresholds; total on [0, 100]."""

    thresholds: tuple[tuple[float, str], ...] = (
        (93.0, "A"), (90.0, "A-"), (87.0, "B+"), (83.0, "B"), (80.0, "B-"),
        (77.0, "C+"), (73.0, "C"), (70.0, "C-"), (67.0, "D+"), (63.0, "D"),
        (60.0, "D-"),
    )
    floor: str = "F"

    def __post_init__(self) -> None:
        cuts = [t for t, _ in self.thresholds]
        if cuts != sorted(cuts, reverse=True) or len(set(cuts)) != len(cuts):
            raise ValueError("thresholds must be strictly decreasing")

    def grade(self, percentage: float) -> str:
        if not 0 <= percentage <= 100:
            raise ValueError(f"percentage {percentage} out of [0, 100]")
        for cut, letter in self.thresholds:
            if percentage >= cut:
                return letter
        return self.floor

    @classmethod
    def parse(cls, text: str) -> "GradeScale":
        """Parse overrides like ``A=93,A-=90,...,D-=60`` (F is the floor)."""
        pairs = []
        for chunk in text.split(","):
            letter, sep, cut = chunk.partition("=")
            if not sep:
                raise ValueError(f"bad grade override {chunk!r}")
            pairs.append((float(cut), letter.strip()))
        pairs.sort(key=lambda p: -p[0])
        return cls(thresholds=tuple(pairs))


DEFAULT_GRADE_SCALE = GradeScale()


def grade(percentage: float, scale: GradeScale = DEFAULT_GRADE_SCALE) -> str:
    return scale.grade(percentage)


# ---------------------------------------------------------------------------
# Aggregates over the event log
# ---------------------------------------------------------------------------


def _sessions(events: Iterable[PracticeEvent]) -> list[list[PracticeEvent]]:
    by_id: dict[str, list[PracticeEvent]] = {}
    for event in events:
        by_id.setdefault(event.session_id, []).append(event)
    return list(by_id.values())


def logbook(
    events: Iterable[PracticeEvent],
    user: str,
    start: Optional[datetime] = None,
    end: Optional[datetime] = None,
) -> list[SessionSummary]:
    """Per-session rows for one user, newest first.

    Repeated attempts of the same exercise stay separate rows.  The time
    range filters on session start.
    """
    rows = [
        session_stats(group)
        for group in _sessions(e for e in events if e.user_id == user)
    ]
    rows = [
        r
        for r in rows
        if (start is None or r.started_at >= start)
        and (end is None or r.started_at <= end)
    ]
    rows.sort(key=lambda r: (r.started_at, r.session_id), reverse=True)
    return rows


@dataclass(frozen=True)
class PointsConfig:
    """Scoring constants; facilitators may retune them.

    A correct answer at the reference speed is worth ``base`` points,
    faster answers score proportionally more up to ``cap`` times the base,
    wrong answers score zero.
    """

    reference_time_s: float = 10.0
    base: float = 10.0
    cap: float = 2.0

    @classmethod
    def parse(cls, text: str) -> "PointsConfig":
        """Parse overrides like ``reference_time_s=10,base=10,cap=2``."""
        values = {}
        for chunk in text.split(","):
            key, sep, value = chunk.partition("=")
            if not sep:
                raise ValueError(f"bad points override {chunk!r}")
            values[key.strip()] = float(value)
        return cls(**values)


DEFAULT_POINTS = PointsConfig()


@dataclass(frozen=True)
class UserTotals:
    user_id: str
    total_points: float
    total_time_s: float
    correct: int
    wrong: int

    def rendered(self) -> dict[str, str]:
        return {
            "user_id": self.user_id,
            "total_points": render_stat(self.total_points),
            "total_time": format_duration(self.total_time_s),
            "correct": str(self.correct),
            "wrong": str(self.wrong),
        }


def event_points(event: PracticeEvent, config: PointsConfig = DEFAULT_POINTS) -> float:
    if not event.correct:
        return 0.0
    return config.base * min(config.cap, config.reference_time_s / event.elapsed)


def user_totals(
    events: Iterable[PracticeEvent],
    user: str,
    start: Optional[datetime] = None,
    end: Optional[datetime] = None,
    config: PointsConfig = DEFAULT_POINTS,
) -> UserTotals:
    """Point and practice-time totals feeding the ranking."""
    mine = [
        e
        for e in events
        if e.user_id == user
        and (start is None or e.started_at >= start)
        and (end is None or e.started_at <= end)
    ]
    return UserTotals(
        user_id=user,
        total_points=sum(event_points(e, config) for e in mine),
        total_time_s=sum(e.elapsed for e in mine),
        correct=sum(1 for e in mine if e.correct),
        wrong=sum(1 for e in mine if not e.correct),
    )


def meets_hundred_hours(totals: UserTotals) -> bool:
    """The 100-hour practice requirement, derived from totals alone."""
    return totals.total_time_s >= 100 * 3600


@dataclass(frozen=True)
class RankRow:
    rank: int
    totals: UserTotals


def ranking(
    events: Iterable[PracticeEvent], config: PointsConfig = DEFAULT_POINTS
) -> list[RankRow]:
    """All users by descending total points; ties break on user id."""
    events = list(events)
    users = sorted({e.user_id for e in events})
    totals = [user_totals(events, u, config=config) for u in users]
    totals.sort(key=lambda t: (-t.total_points, t.user_id))
    return [RankRow(rank=i + 1, totals=t) for i, t in enumerate(totals)]


class Trend(str, enum.Enum):
    IMPROVED = "improved"
    WORSENED = "worsened"
    STEADY = "steady"


@dataclass(frozen=True)
class WeekCell:
    boundary: datetime
    grade: Optional[str]
    cumulative_time_s: float
    trend: Optional[Trend]


def class_report(
    events: Iterable[PracticeEvent],
    users: Sequence[str],
    week_boundaries: Sequence[datetime],
    scale: GradeScale = DEFAULT_GRADE_SCALE,
) -> dict[str, list[WeekCell]]:
    """Weekly grade/time table: one row per user, one cell per boundary.

    The grade at a boundary is the unweighted percentage over all graded
    (grade_task) events up to it; cumulative time covers all events.  The
    trend compares adjacent weeks on the grade ladder; the first week has
    none.
    """
    if list(week_boundaries) != sorted(week_boundaries):
        raise ValueError("week boundaries must be ordered")
    events = list(events)
    report: dict[str, list[WeekCell]] = {}
    for user in users:
        mine = [e for e in events if e.user_id == user]
        cells: list[WeekCell] = []
        previous: Optional[str] = None
        for boundary in week_boundaries:
            upto = [e for e in mine if e.started_at <= boundary]
            graded = [e for e in upto if e.mode is Mode.GRADE_TASK]
            letter: Optional[str] = None
            if graded:
                c = sum(1 for e in graded if e.correct)
                letter = scale.grade(percent(c, len(graded) - c))
            trend: Optional[Trend] = None
            if cells and letter is not None and previous is not None:
                delta = GRADE_LADDER.index(letter) - GRADE_LADDER.index(previous)
                trend = (
                    Trend.IMPROVED
                    if delta > 0
                    else Trend.WORSENED if delta < 0 else Trend.STEADY
                )
            cells.append(
                WeekCell(
                    boundary=boundary,
                    grade=letter,
                    cumulative_time_s=sum(e.elapsed for e in upto),
                    trend=trend,
                )
            )
            if letter is not None:
                previous = letter
        report[user] = cells
    return report


@dataclass(frozen=True)
class ReportRow:
    exercise_name: str
    answered: int
    percentage: float
    grade: str
    attempts: int = 1

    def rendered(self) -> dict[str, str]:
        return {
            "exercise_name": self.exercise_name,
            "answered": str(self.answered),
            "percentage": render_stat(self.percentage),
            "grade": self.grade,
            "attempts": str(self.attempts),
        }


def task_report(
    events: Iterable[PracticeEvent],
    user: str,
    scale: GradeScale = DEFAULT_GRADE_SCALE,
) -> list[ReportRow]:
    """Per-task totals over all events (practice and graded), by name."""
    groups: dict[str, list[PracticeEvent]] = {}
    for event in events:
        if event.user_id == user:
            groups.setdefault(event.exercise_name, []).append(event)
    rows = []
    for name in sorted(groups):
        mine = groups[name]
        c = sum(1 for e in mine if e.correct)
        pct = percent(c, len(mine) - c)
        rows.append(
            ReportRow(
                exercise_name=name,
                answered=len(mine),
                percentage=pct,
                grade=scale.grade(pct),
            )
        )
    return rows


def test_report(
    events: Iterable[PracticeEvent],
    user: str,
    test_id: str,
    scale: GradeScale = DEFAULT_GRADE_SCALE,
) -> list[ReportRow]:
    """Per-section grades for one test: grade_task events only.

    A learner may re-grade an exercise; the latest graded session wins and
    the superseded attempts are surfaced through ``attempts``.
    """
    groups: dict[str, dict[str, list[PracticeEvent]]] = {}
    for event in events:
        if (
            event.user_id == user
            and event.mode is Mode.GRADE_TASK
            and event.exercise_name.startswith(test_id)
        ):
            groups.setdefault(event.exercise_name, {}).setdefault(
                event.session_id, []
            ).append(event)
    rows = []
    for name in sorted(groups):
        sessions = groups[name]
        latest = max(sessions.values(), key=lambda evs: min(e.started_at for e in evs))
        c = sum(1 for e in latest if e.correct)
        pct = percent(c, len(latest) - c)
        rows.append(
            ReportRow(
                exercise_name=name,
                answered=len(latest),
                percentage=pct,
                grade=scale.grade(pct),
                attempts=len(sessions),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Tab-separated exports (the facilitator-facing report formats)
# ---------------------------------------------------------------------------

LOGBOOK_HEADER = (
    "Filename\tStart at\tDuration (min:sec)\tSeconds per right\tCorrect\tWrong"
    "\tCorrect per minute\tAccuracy\tProficiency"
)


def export_logbook(rows: Sequence[SessionSummary]) -> str:
    lines = [LOGBOOK_HEADER]
    for row in rows:
        r = row.rendered()
        lines.append(
            "\t".join(
                [
                    r["exercise_name"], r["started_at"], r["duration"],
                    r["seconds_per_right"], r["correct"], r["wrong"],
                    r["correct_per_minute"], r["accuracy"], r["proficiency"],
                ]
            )
        )
    return "\n".join(lines) + "\n"


def export_ranking(rows: Sequence[RankRow]) -> str:
    lines = ["Rank\tUser\tTotal Point\tTime"]
    for row in rows:
        r = row.totals.rendered()
        lines.append(f"{row.rank}\t{r['user_id']}\t{r['total_points']}\t{r['total_time']}")
    return "\n".join(lines) + "\n"


TREND_MARK = {None: "", Trend.IMPROVED: " +", Trend.WORSENED: " -", Trend.STEADY: ""}


def export_class(report: Mapping[str, list[WeekCell]]) -> str:
    users = sorted(report)
    if not users:
        return "User\n"
    boundaries = [c.boundary.strftime("%Y-%m-%d") for c in report[users[0]]]
    lines = ["\t".join(["User", *boundaries])]
    for user in users:
        cells = []
        for cell in report[user]:
            letter = cell.grade if cell.grade is not None else "-"
            cells.append(
                f"{letter} {format_duration(cell.cumulative_time_s)}{TREND_MARK[cell.trend]}"
            )
        lines.append("\t".join([user, *cells]))
    return "\n".join(lines) + "\n"


def export_report_rows(rows: Sequence[ReportRow]) -> str:
    lines = ["Task\tAnswered\tPercentage\tGrade"]
    for row in rows:
        r = row.rendered()
        lines.append(
            f"{r['exercise_name']}\t{r['answered']}\t{r['percentage']}\t{r['grade']}"
        )
    return "\n".join(lines) + "\n"
