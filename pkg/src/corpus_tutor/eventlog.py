"""Durable append-only practice-event log.

One record per line, tab-separated:

    seq  schema_version  user_id  session_id  exercise_name  question_id
    started_at(ISO-8601)  elapsed_s  correct(0|1)
    per_feature(feature=0|1 comma list)  mode

Answer records are appended the moment a submission is accepted.  The
SAVE-outcome / GRADE-task decision only exists at session finish, so it
travels as a *control record* in the same grammar (question_id
``__finish__``, elapsed 0) and aggregation resolves each session's
effective mode from its finish record, defaulting to save_outcome.
Records are immutable once written; appends are serialized through one
writer and fsynced before returning.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional

from .errors import LogWriteError, SchemaVersionError
from .stats import Mode, PracticeEvent

SCHEMA_VERSION = 1
FINISH_MARKER = "__finish__"
ABSENT = "-"


@dataclass(frozen=True)
class EventRecord:
    seq: int
    schema_version: int
    user_id: str
    session_id: str
    exercise_name: str
    question_id: str
    started_at: datetime
    elapsed_s: float
    correct: bool
    per_feature: tuple[tuple[str, bool], ...]
    mode: Mode

    @property
    def is_finish(self) -> bool:
        return self.question_id == FINISH_MARKER

    def to_line(self) -> str:
        features = (
            ",".join(f"{k}={1 if v else 0}" for k, v in self.per_feature) or ABSENT
        )
        return "\t".join(
            [
                str(self.seq),
                str(self.schema_version),
                self.user_id,
                self.session_id,
                self.exercise_name,
                self.question_id,
                self.started_at.isoformat(),
                repr(self.elapsed_s) if self.elapsed_s % 1 else str(int(self.elapsed_s)),
                "1" if self.correct else "0",
                features,
                self.mode.value,
            ]
        )

    @classmethod
    def from_line(cls, line: str) -> "EventRecord":
        cells = line.rstrip("\n").split("\t")
        if len(cells) != 11:
            raise ValueError(f"event line needs 11 columns, got {len(cells)}")
        version = int(cells[1])
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(f"unsupported schema version {version}")
        per_feature: tuple[tuple[str, bool], ...] = ()
        if cells[9] != ABSENT:
            pairs = []
            for chunk in cells[9].split(","):
                name, _, flag = chunk.partition("=")
                pairs.append((name, flag == "1"))
            per_feature = tuple(pairs)
        return cls(
            seq=int(cells[0]),
            schema_version=version,
            user_id=cells[2],
            session_id=cells[3],
            exercise_name=cells[4],
            question_id=cells[5],
            started_at=datetime.fromisoformat(cells[6]),
            elapsed_s=float(cells[7]),
            correct=cells[8] == "1",
            per_feature=per_feature,
            mode=Mode(cells[10]),
        )


class EventLog:
    """Single-writer append-only log backed by one newline-delimited file.

    Reads are served from an in-memory copy guarded by the writer lock;
    snapshots are point-in-time consistent copies.  Reopening the same
    path replays the file, so a restart loses nothing that was appended.
    """

    def __init__(self, path: str | os.PathLike) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: list[EventRecord] = []
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._records.append(EventRecord.from_line(line))
        else:
            self.path.touch()
        self._seq = self._records[-1].seq if self._records else 0
        self._fh = self.path.open("a", encoding="utf-8")

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def append(self, record: EventRecord) -> int:
        """Durably append; returns the assigned sequence number."""
        if record.schema_version != SCHEMA_VERSION:
            raise SchemaVersionError(
                f"cannot append schema version {record.schema_version}"
            )
        with self._lock:
            stamped = replace(record, seq=self._seq + 1)
            try:
                self._fh.write(stamped.to_line() + "\n")
                self._fh.flush()
                os.fsync(self._fh.fileno())
            except OSError as exc:
                raise LogWriteError(f"append failed: {exc}") from exc
            self._seq = stamped.seq
            self._records.append(stamped)
            return stamped.seq

    def snapshot(
        self,
        user: Optional[str] = None,
        exercise: Optional[str] = None,
        start: Optional[datetime] = None,
        end: Optional[datetime] = None,
        include_finish: bool = False,
    ) -> list[EventRecord]:
        """Point-in-time consistent, sequence-ordered view of the log."""
        with self._lock:
            records = list(self._records)
        out = []
        for r in records:
            if r.is_finish and not include_finish:
                continue
            if user is not None and r.user_id != user:
                continue
            if exercise is not None and r.exercise_name != exercise:
                continue
            if start is not None and r.started_at < start:
                continue
            if end is not None and r.started_at > end:
                continue
            out.append(r)
        return out

    def session_count(self, user: str) -> int:
        with self._lock:
            return len({r.session_id for r in self._records if r.user_id == user})


def resolve_modes(records: Iterable[EventRecord]) -> dict[str, Mode]:
    """Effective mode per session: its finish record's mode, if any."""
    modes: dict[str, Mode] = {}
    for record in records:
        if record.is_finish:
            modes[record.session_id] = record.mode
    return modes


def practice_events(records: Iterable[EventRecord]) -> list[PracticeEvent]:
    """Answer records as PracticeEvents with resolved session modes."""
    records = list(records)
    modes = resolve_modes(records)
    events = []
    for r in records:
        if r.is_finish:
            continue
        events.append(
            PracticeEvent(
                user_id=r.user_id,
                exercise_name=r.exercise_name,
                question_id=r.question_id,
                started_at=r.started_at,
                elapsed=r.elapsed_s,
                correct=r.correct,
                per_feature=dict(r.per_feature),
                mode=modes.get(r.session_id, r.mode),
                session_id=r.session_id,
            )
        )
    return events


def load_events(path: str | os.PathLike) -> list[PracticeEvent]:
    """Replay a log file from disk into practice events."""
    records = []
    p = Path(path)
    if p.exists():
        with p.open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    records.append(EventRecord.from_line(line))
    return practice_events(records)
