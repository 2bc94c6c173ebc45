"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run directly with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import random
import threading
import time
from contextlib import contextmanager
from datetime import datetime, timedelta

from corpus_tutor import sample_corpus_text, sample_translit_text
from corpus_tutor.eventlog import EventLog, load_events
from corpus_tutor.exercise import ExerciseSpec, Kind, RankScope, VerseScope, check, generate
from corpus_tutor.ingest import TranslitTable, parse_corpus
from corpus_tutor.model import Pos, VerseRef, recompute_ctc, text_slice
from corpus_tutor.service import Service
from corpus_tutor.stats import (
    Mode,
    derive_session_stats,
    grade,
    logbook,
    render_stat,
    user_totals,
)
from conftest import make_rank_corpus_text


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def test_table2_logbook_regression():
    rows = [
        (46, 5, 0, "9.2", "1.3", "5", "1.3"),
        (51, 4, 1, "12.8", "0.94", "5", "0.75"),
        (57, 4, 1, "14.3", "0.84", "5", "0.67"),
        (41, 5, 0, "8.2", "1.46", "5", "1.46"),
        (32, 4, 1, "8", "1.5", "5", "1.2"),
        (65, 5, 0, "13", "0.92", "5", "0.92"),
    ]
    with criterion("table2-logbook-regression"):
        started = time.perf_counter()
        for d, c, w, spr, cpm, acc, prof in rows:
            got_spr, got_cpm, got_acc, got_prof = derive_session_stats(d, c, w)
            assert render_stat(got_spr, 1) == spr
            assert render_stat(got_cpm) == cpm
            assert render_stat(got_acc) == acc
            assert render_stat(got_prof) == prof
        assert time.perf_counter() - started < 1.0


def test_progress_table_regression():
    rows = [
        # (published seconds-per-right, correct, wrong, acc, cpm, prof)
        (6.4, 212, 28, "8.57", "0.04", "0.03"),
        (9.2, 141, 27, "6.22", "0.04", "0.03"),
        (10.1, 145, 59, "3.46", "0.03", "0.02"),
    ]
    with criterion("progress-table-regression"):
        for spr, c, w, acc, cpm, prof in rows:
            duration = spr * c
            _, got_cpm, got_acc, got_prof = derive_session_stats(duration, c, w)
            assert render_stat(got_acc) == acc
            assert render_stat(got_cpm) == cpm
            assert render_stat(got_prof) == prof


def test_grade_mapping():
    pairs = [
        (81.14, "B-"), (35.71, "F"), (88.57, "B+"), (93.75, "A"),
        (80, "B-"), (91.67, "A-"), (68.18, "D+"),
    ]
    with criterion("grade-mapping"):
        for pct, letter in pairs:
            assert grade(pct) == letter


def test_figure2_corpus_fidelity():
    with criterion("figure2-corpus-fidelity"):
        table = TranslitTable.parse(sample_translit_text())
        corpus, report = parse_corpus(sample_corpus_text(), table)
        assert report.ok and corpus is not None
        rows = text_slice(
            corpus, VerseRef("Joshua", 24, 29), VerseRef("Joshua", 24, 33)
        )
        assert [r.clause.label for r in rows] == [
            "Way0", "WayX", "Way0", "NmCl", "XQt", "Way0", "xQt0",
        ]
        assert [r.clause.ctc for r in rows] == [
            "477", "477", "477", "10", "427", "472", "12",
        ]
        for row in rows:
            assert recompute_ctc(corpus, row.clause) == row.clause.ctc


def _scope_oracle(corpus, spec, question):
    """Brute-force check that a question's target obeys scope and filters."""
    if isinstance(spec.scope, VerseScope):
        lo = corpus.verse_key(spec.scope.start)
        hi = corpus.verse_key(spec.scope.end)
        allowed = {
            w.monad for w in corpus.words if lo <= corpus.verse_key(w.verse) <= hi
        }
    else:
        allowed = {w.monad for w in corpus.words}
    if spec.kind is Kind.VOCABULARY:
        lex = question.target_lexeme
        count = sum(1 for w in corpus.words if w.lexeme_id == lex)
        assert count > 0
        if isinstance(spec.scope, RankScope):
            rank = _brute_force_rank(corpus)[lex]
            assert spec.scope.lo <= rank <= spec.scope.hi
        return
    if spec.kind is Kind.CLAUSE_ID_DRILL:
        clause = corpus.clause_of(question.target_monad)
        assert any(m in allowed for m in clause.span.monads())
        return
    assert question.target_monad in allowed
    word = corpus.word(question.target_monad)
    if spec.kind is Kind.VERB_PARSING:
        assert word.pos is Pos.VERB
        if spec.verb_class_filter:
            assert word.verb_class & spec.verb_class_filter


def _brute_force_rank(corpus):
    counts = {}
    for w in corpus.words:
        counts[w.lexeme_id] = counts.get(w.lexeme_id, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return {lex: i + 1 for i, (lex, _) in enumerate(ordered)}


def test_oracle_property_suite():
    with criterion("oracle-property-suite"):
        table = TranslitTable.parse(sample_translit_text())
        joshua, _ = parse_corpus(sample_corpus_text(), table)
        synthetic, _ = parse_corpus(make_rank_corpus_text(320, seed=5))
        rng = random.Random(20260809)
        verse_scope = VerseScope(VerseRef("Joshua", 24, 29), VerseRef("Joshua", 24, 33))
        generations = 0
        while generations < 1000:
            roll = rng.randrange(7)
            if roll == 0:
                corpus = synthetic
                spec = ExerciseSpec(
                    kind=Kind.VOCABULARY,
                    name="Vocabulary band",
                    scope=RankScope(*sorted((rng.randint(1, 310), rng.randint(1, 310)))),
                    question_count=rng.randint(1, 6),
                    choices_per_question=rng.choice([0, 3, 4]),
                )
            else:
                corpus = joshua
                kind = [
                    Kind.TYPING, Kind.VERB_PARSING, Kind.POS_ID,
                    Kind.CLAUSE_ID_DRILL, Kind.TRANSLATION_GLOSS, Kind.NOUN_PARSING,
                ][roll - 1]
                asked = frozenset()
                if kind is Kind.VERB_PARSING:
                    asked = frozenset(
                        rng.sample(["stem", "tense", "person", "gender", "number"], 2)
                    )
                elif kind is Kind.NOUN_PARSING:
                    asked = frozenset(rng.sample(["gender", "number", "state"], 2))
                choices = 0
                if kind in (Kind.POS_ID, Kind.CLAUSE_ID_DRILL, Kind.TRANSLATION_GLOSS):
                    choices = rng.choice([0, 4])
                spec = ExerciseSpec(
                    kind=kind,
                    name=f"prop {kind.value}",
                    scope=verse_scope,
                    question_count=rng.randint(1, 6),
                    asked_features=asked,
                    choices_per_question=choices,
                )
            seed = rng.getrandbits(63)
            exercise = generate(spec, corpus, seed)
            again = generate(spec, corpus, seed)
            assert exercise.to_text() == again.to_text(), "generation not deterministic"
            for question in exercise.questions:
                submission = (
                    dict(question.answer_key)
                    if isinstance(question.answer_key, dict)
                    else question.answer_key
                )
                feedback = check(question, submission, 1.0)
                assert feedback.overall, "answer key failed its own check"
                if question.choices is not None:
                    assert question.answer_key in question.choices
                    assert len(set(question.choices)) == len(question.choices)
                _scope_oracle(corpus, spec, question)
            generations += 1
        assert generations >= 1000


def test_log_replay_equivalence(tmp_path):
    with criterion("log-replay-equivalence"):
        corpus, _ = parse_corpus(make_rank_corpus_text(80, seed=9))
        path = tmp_path / "events.log"
        users = [f"user{i:02d}" for i in range(20)]
        answers_per_session = 10
        sessions_per_phase = 25  # 20 users x 50 sessions x 10 answers = 10,000
        tracker_lock = threading.Lock()
        tracker = {
            u: {"points": 0.0, "time": 0.0, "correct": 0, "wrong": 0} for u in users
        }
        accepted = {u: 0 for u in users}
        clock_base = datetime(2016, 10, 1, 8, 0)

        def run_phase(service, phase):
            def run_user(u_index, user):
                spec = ExerciseSpec(
                    kind=Kind.VOCABULARY,
                    name=f"Drill {u_index % 4}",
                    scope=RankScope(1, 60),
                    question_count=answers_per_session,
                    choices_per_question=0,
                )
                for s in range(sessions_per_phase):
                    session = service.create_session(user, spec, seed=s * 31 + u_index)
                    for q_index, question in enumerate(session.exercise.questions):
                        right = (u_index * 37 + s * 11 + q_index * 7) % 3 != 0
                        submission = (
                            question.answer_key if right else "deliberately wrong"
                        )
                        elapsed = 2.0 + ((u_index + s + q_index) % 10)
                        feedback = service.answer(
                            user, session.session_id, question.id, submission, elapsed
                        )
                        assert feedback.overall == right
                        with tracker_lock:
                            accepted[user] += 1
                            row = tracker[user]
                            row["time"] += elapsed
                            if right:
                                row["correct"] += 1
                                row["points"] += 10.0 * min(2.0, 10.0 / elapsed)
                            else:
                                row["wrong"] += 1
                    mode = Mode.GRADE_TASK if s % 2 else Mode.SAVE_OUTCOME
                    service.finish(user, session.session_id, mode)

            threads = [
                threading.Thread(target=run_user, args=(i, u))
                for i, u in enumerate(users)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()

        tick = {"n": 0}
        tick_lock = threading.Lock()

        def clock():
            with tick_lock:
                tick["n"] += 1
                return clock_base + timedelta(seconds=tick["n"])

        log = EventLog(path)
        service = Service(corpus, log, clock=clock)
        run_phase(service, 0)
        midpoint = len(log.snapshot())
        log.close()  # restart mid-run

        log2 = EventLog(path)
        assert len(log2.snapshot()) == midpoint, "restart lost accepted events"
        service2 = Service(corpus, log2, clock=clock)
        run_phase(service2, 1)
        log2.close()

        events = load_events(path)
        assert len(events) == 20 * 2 * sessions_per_phase * answers_per_session
        assert sum(accepted.values()) == len(events)
        for user in users:
            totals = user_totals(events, user)
            row = tracker[user]
            assert totals.correct == row["correct"]
            assert totals.wrong == row["wrong"]
            assert abs(totals.total_time_s - row["time"]) < 1e-6
            assert abs(totals.total_points - row["points"]) < 1e-6
            rows = logbook(events, user)
            assert len(rows) == 2 * sessions_per_phase
            # graded/practice split survives the replay (odd sessions grade)
            graded = {r.session_id for r in rows if r.mode is Mode.GRADE_TASK}
            assert len(graded) == 2 * (sessions_per_phase // 2)


def test_frequency_band_drill():
    with criterion("frequency-band-drill"):
        text = make_rank_corpus_text(320, seed=13)
        corpus, report = parse_corpus(text)
        assert report.ok
        # independent oracle straight from the raw file's lexeme column
        counts = {}
        for line in text.splitlines():
            if line.startswith("W\t"):
                lexeme = line.split("\t")[7]
                counts[lexeme] = counts.get(lexeme, 0) + 1
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        band = {lex for i, (lex, _) in enumerate(ordered) if 281 <= i + 1 <= 300}
        assert len(band) == 20
        spec = ExerciseSpec(
            kind=Kind.VOCABULARY,
            name="Vocabulary 281-300",
            scope=RankScope(281, 300),
            question_count=5,
            choices_per_question=4,
        )
        seen = set()
        for seed in range(50):
            exercise = generate(spec, corpus, seed)
            for q in exercise.questions:
                assert q.target_lexeme in band
                seen.add(q.target_lexeme)
        assert len(seen) > 10  # the drill actually roams the band
