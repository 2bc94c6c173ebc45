"""Statistics engine: the published table rows, grades, and reports."""

from datetime import datetime, timedelta

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus_tutor.errors import EmptySessionError, NoAnswersError
from corpus_tutor.stats import test_report as build_test_report
from corpus_tutor.stats import (
    GRADE_LADDER,
    GradeScale,
    Mode,
    PointsConfig,
    PracticeEvent,
    Trend,
    class_report,
    derive_session_stats,
    event_points,
    export_class,
    export_logbook,
    export_ranking,
    export_report_rows,
    format_duration,
    format_minsec,
    grade,
    logbook,
    meets_hundred_hours,
    percent,
    ranking,
    render_stat,
    session_stats,
    task_report,
    user_totals,
)

T0 = datetime(2016, 3, 1, 13, 30)


def make_events(
    user="u1",
    name="Vocabulary 281-300",
    session="s1",
    start=T0,
    answers=((True, 9.2),),
    mode=Mode.SAVE_OUTCOME,
):
    events = []
    at = start
    for i, (correct, elapsed) in enumerate(answers):
        events.append(
            PracticeEvent(
                user_id=user,
                exercise_name=name,
                question_id=f"q{i + 1}-m:{i + 1}",
                started_at=at,
                elapsed=elapsed,
                correct=correct,
                per_feature={"gloss": correct},
                mode=mode,
                session_id=session,
            )
        )
        at += timedelta(seconds=elapsed)
    return events


def answers(correct, wrong, duration):
    """Spread a session duration evenly over its answers."""
    n = correct + wrong
    each = duration / n
    return tuple([(True, each)] * correct + [(False, each)] * wrong)


# Table 2 logbook rows: inputs and every rendered derived cell.
LOGBOOK_ROWS = [
    (46, 5, 0, "9.2", "1.3", "5", "1.3"),
    (51, 4, 1, "12.8", "0.94", "5", "0.75"),
    (57, 4, 1, "14.3", "0.84", "5", "0.67"),
    (41, 5, 0, "8.2", "1.46", "5", "1.46"),
    (32, 4, 1, "8", "1.5", "5", "1.2"),
    (65, 5, 0, "13", "0.92", "5", "0.92"),
]


class TestSessionStats:
    @pytest.mark.parametrize("d,c,w,spr,cpm,acc,prof", LOGBOOK_ROWS)
    def test_logbook_rows_render_exactly(self, d, c, w, spr, cpm, acc, prof):
        events = make_events(answers=answers(c, w, d))
        row = session_stats(events)
        rendered = row.rendered()
        assert rendered["seconds_per_right"] == spr
        assert rendered["correct_per_minute"] == cpm
        assert rendered["accuracy"] == acc
        assert rendered["proficiency"] == prof

    def test_progress_rows(self):
        # Durations are back-computed from the published seconds-per-right.
        for spr, c, w, acc, cpm, prof in [
            (6.4, 212, 28, "8.57", "0.04", "0.03"),
            (9.2, 141, 27, "6.22", "0.04", "0.03"),
            (10.1, 145, 59, "3.46", "0.03", "0.02"),
        ]:
            got = derive_session_stats(spr * c, c, w)
            assert render_stat(got[2]) == acc
            assert render_stat(got[1]) == cpm
            assert render_stat(got[3]) == prof

    def test_zero_correct_has_null_spr(self):
        row = session_stats(make_events(answers=((False, 5.0), (False, 5.0))))
        assert row.seconds_per_right is None
        assert row.rendered()["seconds_per_right"] == "-"

    def test_empty_session(self):
        with pytest.raises(EmptySessionError):
            session_stats([])

    def test_mixed_sessions_rejected(self):
        events = make_events() + make_events(session="s2")
        with pytest.raises(ValueError):
            session_stats(events)

    def test_proficiency_bounded_by_cpm(self):
        for d, c, w, *_ in LOGBOOK_ROWS + [(100, 3, 7, 0, 0, 0, 0)]:
            _, cpm, _, prof = derive_session_stats(d, c, w)
            assert prof <= cpm + 1e-12
            if w == 0:
                assert prof == pytest.approx(cpm)

    def test_accuracy_lower_bound(self):
        for w in range(1, 6):
            _, _, acc, _ = derive_session_stats(30, 5, w)
            assert acc >= 1
        assert derive_session_stats(30, 5, 0)[2] == 5


class TestRendering:
    def test_half_up_at_one_decimal(self):
        assert render_stat(14.25, 1) == "14.3"
        assert render_stat(12.75, 1) == "12.8"

    def test_trailing_zeros_trimmed(self):
        assert render_stat(8.0, 1) == "8"
        assert render_stat(1.30) == "1.3"
        assert render_stat(1.5) == "1.5"
        assert render_stat(0.94) == "0.94"

    def test_durations(self):
        assert format_duration(41) == "00:00:41"
        assert format_duration(62 * 3600 + 42 * 60 + 17) == "62:42:17"
        assert format_duration(116 * 3600 + 12 * 60 + 54) == "116:12:54"
        assert format_minsec(46) == "00:46"
        assert format_minsec(65) == "01:05"


class TestPercentAndGrade:
    def test_percent_examples(self):
        assert percent(5, 0) == 100
        assert percent(1, 1) == 50
        assert percent(88, 12) == pytest.approx(88.0)

    def test_percent_requires_answers(self):
        with pytest.raises(NoAnswersError):
            percent(0, 0)

    @pytest.mark.parametrize(
        "pct,letter",
        [
            (81.14, "B-"), (35.71, "F"), (88.57, "B+"), (93.75, "A"),
            (80, "B-"), (91.67, "A-"), (68.18, "D+"),
        ],
    )
    def test_published_grade_pairs(self, pct, letter):
        assert grade(pct) == letter

    def test_boundaries(self):
        assert grade(100) == "A"
        assert grade(93) == "A"
        assert grade(92.99) == "A-"
        assert grade(60) == "D-"
        assert grade(59.999) == "F"
        assert grade(0) == "F"

    @given(st.floats(min_value=0, max_value=100), st.floats(min_value=0, max_value=100))
    def test_monotone(self, p1, p2):
        if p1 >= p2:
            assert GRADE_LADDER.index(grade(p1)) >= GRADE_LADDER.index(grade(p2))

    def test_scale_overrides(self):
        scale = GradeScale.parse("A=90,B=75,C=50")
        assert scale.grade(91) == "A"
        assert scale.grade(80) == "B"
        assert scale.grade(49) == "F"

    def test_bad_scale_rejected(self):
        with pytest.raises(ValueError):
            GradeScale(thresholds=((80.0, "B"), (90.0, "A")))


class TestLogbook:
    def test_six_sessions_newest_first(self):
        events = []
        starts = []
        for i, (d, c, w, *_r) in enumerate(LOGBOOK_ROWS):
            start = T0 + timedelta(minutes=i)
            starts.append(start)
            events += make_events(session=f"s{i}", start=start, answers=answers(c, w, d))
        rows = logbook(events, "u1")
        assert len(rows) == 6
        assert [r.started_at for r in rows] == sorted(starts, reverse=True)
        assert all(r.exercise_name == "Vocabulary 281-300" for r in rows)

    def test_empty_range(self):
        events = make_events()
        assert logbook(events, "u1", start=T0 + timedelta(days=9)) == []

    def test_range_splits_sessions(self):
        events = make_events(session="s1", start=T0) + make_events(
            session="s2", start=T0 + timedelta(hours=2)
        )
        rows = logbook(events, "u1", start=T0 + timedelta(hours=1))
        assert [r.session_id for r in rows] == ["s2"]

    def test_other_users_filtered(self):
        events = make_events() + make_events(user="u2", session="s9")
        assert all(r.session_id == "s1" for r in logbook(events, "u1"))


class TestTotalsAndRanking:
    def test_reference_speed_scores_base(self):
        event = make_events(answers=((True, 10.0),))[0]
        assert event_points(event) == pytest.approx(10.0)

    def test_fast_answer_hits_cap(self):
        event = make_events(answers=((True, 2.0),))[0]
        assert event_points(event) == pytest.approx(20.0)

    def test_wrong_scores_zero(self):
        event = make_events(answers=((False, 2.0),))[0]
        assert event_points(event) == 0.0

    def test_total_time_renders_41s(self):
        events = make_events(answers=answers(5, 0, 41))
        totals = user_totals(events, "u1")
        assert totals.rendered()["total_time"] == "00:00:41"

    def test_custom_points_config(self):
        config = PointsConfig.parse("reference_time_s=5,base=2,cap=3")
        event = make_events(answers=((True, 1.0),))[0]
        assert event_points(event, config) == pytest.approx(6.0)

    def test_hundred_hour_requirement(self):
        short = user_totals(make_events(answers=((True, 3600.0),) * 99), "u1")
        assert not meets_hundred_hours(short)
        long = user_totals(make_events(answers=((True, 3600.0),) * 100), "u1")
        assert meets_hundred_hours(long)

    def test_ranking_orders_by_points(self):
        events = make_events(user="u1", session="a", answers=((True, 2.0),) * 5)
        events += make_events(user="u2", session="b", answers=((True, 2.0),))
        rows = ranking(events)
        assert [(r.rank, r.totals.user_id) for r in rows] == [(1, "u1"), (2, "u2")]

    def test_tie_breaks_on_user_id_with_distinct_ranks(self):
        events = make_events(user="zeta", session="a") + make_events(
            user="alpha", session="b"
        )
        rows = ranking(events)
        assert [(r.rank, r.totals.user_id) for r in rows] == [(1, "alpha"), (2, "zeta")]

    def test_permutation_invariance(self):
        import random

        events = []
        for i, user in enumerate(["u1", "u2", "u3"] * 3):
            events += make_events(
                user=user, session=f"s{i}", answers=((i % 2 == 0, 4.0),)
            )
        baseline = ranking(events)
        for seed in range(5):
            shuffled = events[:]
            random.Random(seed).shuffle(shuffled)
            assert ranking(shuffled) == baseline


class TestClassReport:
    def test_trends(self):
        weeks = [T0 + timedelta(days=7 * i) for i in range(1, 4)]
        events = []
        # week 1: 8/10 -> B-; week 2: same cumulative -> steady; week 3 improves
        events += make_events(
            session="w1", start=T0, answers=answers(8, 2, 50), mode=Mode.GRADE_TASK
        )
        events += make_events(
            session="w3",
            start=T0 + timedelta(days=15),
            answers=answers(10, 0, 50),
            mode=Mode.GRADE_TASK,
        )
        report = class_report(events, ["u1"], weeks)
        cells = report["u1"]
        # grades are cumulative over graded events: 8/10 -> B-, then 18/20 -> A-
        assert [c.grade for c in cells] == ["B-", "B-", "A-"]
        assert cells[0].trend is None
        assert cells[1].trend is Trend.STEADY
        assert cells[2].trend is Trend.IMPROVED

    def test_worsened(self):
        weeks = [T0 + timedelta(days=7), T0 + timedelta(days=14)]
        events = make_events(
            session="g1", start=T0, answers=answers(85, 15, 100), mode=Mode.GRADE_TASK
        ) + make_events(
            session="g2",
            start=T0 + timedelta(days=10),
            answers=answers(0, 25, 100),
            mode=Mode.GRADE_TASK,
        )
        # cumulative week 2: 85 right, 40 wrong -> 68% -> D+
        report = class_report(events, ["u1"], weeks)
        assert [c.grade for c in report["u1"]] == ["B", "D+"]
        assert report["u1"][1].trend is Trend.WORSENED

    def test_cumulative_time_non_decreasing(self):
        weeks = [T0 + timedelta(days=7 * i) for i in range(1, 6)]
        events = []
        for i in range(10):
            events += make_events(
                session=f"s{i}",
                start=T0 + timedelta(days=3 * i),
                answers=answers(3, 2, 40),
                mode=Mode.GRADE_TASK if i % 2 else Mode.SAVE_OUTCOME,
            )
        cells = class_report(events, ["u1"], weeks)["u1"]
        times = [c.cumulative_time_s for c in cells]
        assert times == sorted(times)

    def test_unordered_weeks_rejected(self):
        with pytest.raises(ValueError):
            class_report([], ["u1"], [T0 + timedelta(days=7), T0])


class TestTaskAndTestReports:
    def _table4_events(self):
        events = []
        # English: 3357 answered, 81.14% -> B-
        events += make_events(
            name="English", session="e1", answers=answers(2724, 633, 3357.0)
        )
        # Verb_class: 56 answered, 35.71% -> F
        events += make_events(
            name="Verb_class", session="v1", answers=answers(20, 36, 56.0)
        )
        return events

    def test_table4_rows(self):
        rows = task_report(self._table4_events(), "u1")
        assert [r.rendered() for r in rows] == [
            {
                "exercise_name": "English", "answered": "3357",
                "percentage": "81.14", "grade": "B-", "attempts": "1",
            },
            {
                "exercise_name": "Verb_class", "answered": "56",
                "percentage": "35.71", "grade": "F", "attempts": "1",
            },
        ]

    def test_task_report_pools_both_modes(self):
        events = make_events(session="a", answers=answers(3, 0, 30)) + make_events(
            session="b", answers=answers(0, 2, 20), mode=Mode.GRADE_TASK,
            start=T0 + timedelta(hours=1),
        )
        rows = task_report(events, "u1")
        assert rows[0].answered == 5
        assert rows[0].percentage == pytest.approx(60.0)

    def test_table5_rows(self):
        data = [
            ("Test2A Part Of Speech-5 Questions", 62, 8, "88.57", "B+"),
            ("Test2B Nouns-10 Questions", 45, 3, "93.75", "A"),
            ("Test2C RegularVerb-10 Questions", 40, 10, "80", "B-"),
            ("Test2D Irregular Verb-10 Questions", 66, 6, "91.67", "A-"),
            ("Test2E Translation-5 Questions", 15, 7, "68.18", "D+"),
        ]
        events = []
        for i, (name, c, w, _, _) in enumerate(data):
            events += make_events(
                name=name, session=f"t{i}", answers=answers(c, w, (c + w) * 3.0),
                mode=Mode.GRADE_TASK,
            )
        rows = build_test_report(events, "u1", "Test2")
        assert [(r.exercise_name, r.rendered()["percentage"], r.grade) for r in rows] == [
            (name, pct, letter) for name, _, _, pct, letter in data
        ]

    def test_test_report_ignores_save_outcome(self):
        events = make_events(
            name="Test2A", session="s1", answers=answers(1, 0, 5)
        )
        assert build_test_report(events, "u1", "Test2") == []

    def test_latest_graded_session_wins(self):
        events = make_events(
            name="Test2A", session="old", start=T0, answers=answers(1, 4, 25),
            mode=Mode.GRADE_TASK,
        ) + make_events(
            name="Test2A", session="new", start=T0 + timedelta(days=1),
            answers=answers(5, 0, 25), mode=Mode.GRADE_TASK,
        )
        rows = build_test_report(events, "u1", "Test2")
        assert len(rows) == 1
        assert rows[0].percentage == 100
        assert rows[0].attempts == 2


class TestExports:
    def test_logbook_export_matches_published_cells(self):
        events = []
        for i, (d, c, w, *_r) in enumerate(LOGBOOK_ROWS):
            events += make_events(
                session=f"s{i}", start=T0 + timedelta(minutes=i), answers=answers(c, w, d)
            )
        text = export_logbook(logbook(events, "u1"))
        lines = text.splitlines()
        assert lines[0].startswith("Filename\tStart at\tDuration")
        # newest first: the last LOGBOOK_ROWS entry renders first
        first = lines[1].split("\t")
        assert first[0] == "Vocabulary 281-300"
        assert first[3:] == ["13", "5", "0", "0.92", "5", "0.92"]

    def test_ranking_export_shape(self):
        events = make_events(user="u1") + make_events(user="u2", session="z")
        lines = export_ranking(ranking(events)).splitlines()
        assert lines[0] == "Rank\tUser\tTotal Point\tTime"
        assert len(lines) == 3

    def test_class_export_layout(self):
        weeks = [datetime(2016, 9, 5), datetime(2016, 9, 13)]
        events = make_events(
            start=datetime(2016, 9, 1), answers=answers(8, 2, 135599),
            mode=Mode.GRADE_TASK,
        )
        text = export_class(class_report(events, ["u1"], weeks))
        lines = text.splitlines()
        assert lines[0] == "User\t2016-09-05\t2016-09-13"
        assert lines[1].split("\t")[1] == "B- 37:39:59"

    def test_report_rows_export(self):
        rows = task_report(make_events(answers=answers(4, 1, 20)), "u1")
        text = export_report_rows(rows)
        assert text.splitlines()[1] == "Vocabulary 281-300\t5\t80\tB-"
