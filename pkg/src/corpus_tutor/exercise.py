"""Seeded exercise generation and oracle-based answer checking.

Exercises are pure functions of (spec, corpus, seed, history): the corpus
is the answer oracle, every answer key is copied verbatim from it, and the
same inputs always produce the same questions.  Error-history weighting
(tailoring) biases sampling toward items a learner keeps missing.
"""

from __future__ import annotations

import enum
import random
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .errors import EmptyScopeError, ShapeMismatchError
from .model import Corpus, Pos, VerseRef, Word

DEFAULT_UNSEEN_WEIGHT = 1.5

VERB_FEATURES = frozenset({"stem", "tense", "person", "gender", "number"})
NOUN_FEATURES = frozenset({"gender", "number", "state"})
ASKABLE_FEATURES = frozenset(
    {"stem", "tense", "person", "gender", "number", "state", "pos", "clause_label"}
)


class Kind(str, enum.Enum):
    VOCABULARY = "vocabulary"
    TYPING = "typing"
    VERB_PARSING = "verb_parsing"
    NOUN_PARSING = "noun_parsing"
    POS_ID = "pos_id"
    CLAUSE_ID_DRILL = "clause_id_drill"
    TRANSLATION_GLOSS = "translation_gloss"


PARSING_KINDS = frozenset({Kind.VERB_PARSING, Kind.NOUN_PARSING})

# Feature name used in per-feature feedback for single-answer kinds.
STRING_FEATURE = {
    Kind.VOCABULARY: "gloss",
    Kind.TRANSLATION_GLOSS: "gloss",
    Kind.TYPING: "surface",
    Kind.POS_ID: "pos",
    Kind.CLAUSE_ID_DRILL: "clause_label",
}


@dataclass(frozen=True)
class RankScope:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError(f"bad rank scope {self.lo}-{self.hi}")

    def __str__(self) -> str:
        return f"rank:{self.lo}-{self.hi}"


@dataclass(frozen=True)
class VerseScope:
    start: VerseRef
    end: VerseRef

    def __str__(self) -> str:
        return f"verse:{self.start}-{self.end}"


Scope = Union[RankScope, VerseScope]


def parse_scope(text: str) -> Scope:
    kind, _, rest = text.partition(":")
    if kind == "rank":
        lo, _, hi = rest.partition("-")
        return RankScope(int(lo), int(hi))
    if kind == "verse":
        start, _, end = rest.partition("-")
        return VerseScope(VerseRef.parse(start), VerseRef.parse(end))
    raise ValueError(f"bad scope {text!r}")


@dataclass(frozen=True)
class ExerciseSpec:
    kind: Kind
    name: str
    scope: Optional[Scope] = None
    question_count: int = 5
    verb_class_filter: Optional[frozenset[str]] = None
    asked_features: frozenset[str] = frozenset()
    choices_per_question: int = 0

    def __post_init__(self) -> None:
        if self.question_count < 1:
            raise ValueError("question_count must be positive")
        if self.choices_per_question not in (0,) and self.choices_per_question < 2:
            raise ValueError("choices_per_question must be 0 (typed) or >= 2")
        unknown = self.asked_features - ASKABLE_FEATURES
        if unknown:
            raise ValueError(f"unknown asked features: {sorted(unknown)}")
        if self.kind in (Kind.VOCABULARY, Kind.TRANSLATION_GLOSS) and self.scope is None:
            raise ValueError(f"{self.kind.value} requires a rank or verse scope")
        if self.kind is Kind.VERB_PARSING:
            if not self.asked_features:
                raise ValueError("verb_parsing needs asked_features")
            extra = self.asked_features - VERB_FEATURES
            if extra:
                raise ValueError(f"verb_parsing cannot ask {sorted(extra)}")
        if self.kind is Kind.NOUN_PARSING:
            if not self.asked_features:
                raise ValueError("noun_parsing needs asked_features")
            extra = self.asked_features - NOUN_FEATURES
            if extra:
                raise ValueError(f"noun_parsing cannot ask {sorted(extra)}")

    # -- .spec file / payload encoding --------------------------------------

    def to_text(self) -> str:
        lines = [f"kind={self.kind.value}", f"name={self.name}"]
        if self.scope is not None:
            lines.append(f"scope={self.scope}")
        lines.append(f"question_count={self.question_count}")
        lines.append(f"choices_per_question={self.choices_per_question}")
        if self.asked_features:
            lines.append(f"asked_features={','.join(sorted(self.asked_features))}")
        if self.verb_class_filter:
            lines.append(f"verb_class_filter={','.join(sorted(self.verb_class_filter))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExerciseSpec":
        fields: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"bad spec line {raw!r}")
            fields[key.strip()] = value.strip()
        try:
            kind = Kind(fields.pop("kind"))
            name = fields.pop("name")
        except KeyError as exc:
            raise ValueError(f"spec is missing {exc}") from None
        scope = parse_scope(fields.pop("scope")) if "scope" in fields else None
        count = int(fields.pop("question_count", "5"))
        choices = int(fields.pop("choices_per_question", "0"))
        asked = frozenset(
            f for f in fields.pop("asked_features", "").split(",") if f
        )
        vc_raw = fields.pop("verb_class_filter", "")
        verb_class = frozenset(t for t in vc_raw.split(",") if t) or None
        if fields:
            raise ValueError(f"unknown spec keys: {sorted(fields)}")
        return cls(
            kind=kind,
            name=name,
            scope=scope,
            question_count=count,
            verb_class_filter=verb_class,
            asked_features=asked,
            choices_per_question=choices,
        )


@dataclass(frozen=True)
class Question:
    id: str
    kind: Kind
    item_key: str
    prompt: str
    prompt_translit: str
    answer_key: Union[str, Mapping[str, str]]
    target_monad: Optional[int] = None
    target_lexeme: Optional[str] = None
    asked_features: tuple[str, ...] = ()
    choices: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class Exercise:
    spec: ExerciseSpec
    seed: int
    questions: tuple[Question, ...]

    def to_text(self) -> str:
        """Canonical serialization; equal exercises serialize identically."""
        lines = [self.spec.to_text().rstrip("\n"), f"seed={self.seed}"]
        for q in self.questions:
            key = (
                q.answer_key
                if isinstance(q.answer_key, str)
                else ",".join(f"{k}={v}" for k, v in sorted(q.answer_key.items()))
            )
            cells = [q.id, q.prompt, q.prompt_translit, key]
            if q.choices is not None:
                cells.append("|".join(q.choices))
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FeatureVerdict:
    correct: bool
    expected: str
    got: Optional[str]


@dataclass(frozen=True)
class Feedback:
    overall: bool
    per_feature: Mapping[str, FeatureVerdict]
    elapsed: float


@dataclass(frozen=True)
class ItemStats:
    right: int = 0
    wrong: int = 0
    since_last_error: Optional[int] = None


def adaptive_weight(stats: Optional[ItemStats]) -> float:
    """Sampling weight for one item given its error history.

    weight = 1 + 2*wrong/(right+wrong+1) + 1/(1+items since last error);
    the recency term drops out for items never answered wrong.  Unseen
    items (no stats) get 1.5 so new material keeps entering the mix.
    """
    if stats is None:
        return DEFAULT_UNSEEN_WEIGHT
    if stats.right < 0 or stats.wrong < 0:
        raise ValueError("right and wrong must be >= 0")
    weight = 1.0 + 2.0 * stats.wrong / (stats.right + stats.wrong + 1)
    if stats.since_last_error is not None:
        weight += 1.0 / (1.0 + stats.since_last_error)
    return weight


def build_history(events: Iterable) -> dict[str, ItemStats]:
    """Fold answer events (question_id, correct) into per-item stats.

    Item keys are recovered from question ids of the form ``q<n>-<key>``;
    "items since last error" counts every answer given after the item's
    most recent wrong one.
    """
    rights: dict[str, int] = {}
    wrongs: dict[str, int] = {}
    last_error_at: dict[str, int] = {}
    n = 0
    for event in events:
        qid = getattr(event, "question_id")
        key = qid.split("-", 1)[1] if "-" in qid else qid
        if getattr(event, "correct"):
            rights[key] = rights.get(key, 0) + 1
        else:
            wrongs[key] = wrongs.get(key, 0) + 1
            last_error_at[key] = n
        n += 1
    history = {}
    for key in set(rights) | set(wrongs):
        since = (n - 1 - last_error_at[key]) if key in last_error_at else None
        history[key] = ItemStats(
            right=rights.get(key, 0), wrong=wrongs.get(key, 0), since_last_error=since
        )
    return history


# ---------------------------------------------------------------------------
# Target pools
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Target:
    item_key: str
    prompt: str
    prompt_translit: str
    answer: Union[str, tuple[tuple[str, str], ...]]
    monad: Optional[int] = None
    lexeme: Optional[str] = None


def _monads_in_scope(spec: ExerciseSpec, corpus: Corpus) -> list[Word]:
    words = list(corpus.words)
    if isinstance(spec.scope, VerseScope):
        lo = corpus.verse_key(spec.scope.start)
        hi = corpus.verse_key(spec.scope.end)
        if lo > hi:
            raise EmptyScopeError(f"inverted verse scope {spec.scope}")
        words = [w for w in words if lo <= corpus.verse_key(w.verse) <= hi]
    elif isinstance(spec.scope, RankScope):
        words = [
            w
            for w in words
            if spec.scope.lo <= corpus.lexicon[w.lexeme_id].rank <= spec.scope.hi
        ]
    return words


def _word_feature(word: Word, feature: str) -> Optional[str]:
    value = getattr(word, feature)
    if value is None:
        return None
    if isinstance(value, enum.Enum):
        return value.value
    return str(value)


def _parsing_targets(
    spec: ExerciseSpec, corpus: Corpus, pos: Pos
) -> list[_Target]:
    targets = []
    for word in _monads_in_scope(spec, corpus):
        if word.pos is not pos:
            continue
        if pos is Pos.VERB and spec.verb_class_filter is not None:
            if not (word.verb_class & spec.verb_class_filter):
                continue
        answer = {}
        usable = True
        for feature in sorted(spec.asked_features):
            value = _word_feature(word, feature)
            if value is None:
                usable = False
                break
            answer[feature] = value
        if not usable:
            continue
        targets.append(
            _Target(
                item_key=f"m:{word.monad}",
                prompt=word.surface,
                prompt_translit=word.translit,
                answer=tuple(sorted(answer.items())),
                monad=word.monad,
            )
        )
    return targets


def _target_pool(spec: ExerciseSpec, corpus: Corpus) -> list[_Target]:
    if spec.kind is Kind.VOCABULARY:
        lexemes = {w.lexeme_id for w in _monads_in_scope(spec, corpus)}
        first_of: dict[str, Word] = {}
        for word in corpus.words:
            first_of.setdefault(word.lexeme_id, word)
        return [
            _Target(
                item_key=f"lx:{lex}",
                prompt=first_of[lex].surface,
                prompt_translit=first_of[lex].translit,
                answer=corpus.lexicon[lex].gloss,
                lexeme=lex,
            )
            for lex in sorted(lexemes)
        ]
    if spec.kind is Kind.TRANSLATION_GLOSS:
        return [
            _Target(
                item_key=f"m:{w.monad}",
                prompt=w.surface,
                prompt_translit=w.translit,
                answer=w.gloss,
                monad=w.monad,
                lexeme=w.lexeme_id,
            )
            for w in _monads_in_scope(spec, corpus)
            if w.gloss
        ]
    if spec.kind is Kind.TYPING:
        return [
            _Target(
                item_key=f"m:{w.monad}",
                prompt=w.translit,
                prompt_translit=w.translit,
                answer=w.surface,
                monad=w.monad,
            )
            for w in _monads_in_scope(spec, corpus)
            if w.surface
        ]
    if spec.kind is Kind.VERB_PARSING:
        return _parsing_targets(spec, corpus, Pos.VERB)
    if spec.kind is Kind.NOUN_PARSING:
        return _parsing_targets(spec, corpus, Pos.NOUN)
    if spec.kind is Kind.POS_ID:
        return [
            _Target(
                item_key=f"m:{w.monad}",
                prompt=w.surface,
                prompt_translit=w.translit,
                answer=w.pos.value,
                monad=w.monad,
            )
            for w in _monads_in_scope(spec, corpus)
        ]
    if spec.kind is Kind.CLAUSE_ID_DRILL:
        scope_monads = {w.monad for w in _monads_in_scope(spec, corpus)}
        targets = []
        for clause in corpus.clauses_in_order():
            if not any(m in scope_monads for m in clause.span.monads()):
                continue
            words = corpus.clause_words(clause)
            targets.append(
                _Target(
                    item_key=f"cl:{clause.id}",
                    prompt=" ".join(w.surface for w in words),
                    prompt_translit=" ".join(w.translit for w in words),
                    answer=clause.label,
                    monad=clause.span.first,
                )
            )
        return targets
    raise ValueError(f"unhandled kind {spec.kind}")  # pragma: no cover


def _attested_values(spec: ExerciseSpec, corpus: Corpus) -> list[str]:
    """Distractor stock: values of the answered feature attested corpus-wide."""
    if spec.kind in (Kind.VOCABULARY, Kind.TRANSLATION_GLOSS):
        return sorted({e.gloss for e in corpus.lexicon.values() if e.gloss})
    if spec.kind is Kind.POS_ID:
        return sorted({w.pos.value for w in corpus.words})
    if spec.kind is Kind.CLAUSE_ID_DRILL:
        return sorted({c.label for c in corpus.clauses.values()})
    if spec.kind is Kind.TYPING:
        return sorted({w.surface for w in corpus.words})
    return []


def generate(
    spec: ExerciseSpec,
    corpus: Corpus,
    seed: int,
    history: Optional[Mapping[str, ItemStats]] = None,
) -> Exercise:
    """Deterministically generate an exercise.

    Targets are drawn without replacement (the pool refills if the scope is
    smaller than the question count); with a history present, draws are
    weighted by :func:`adaptive_weight`.  Multiple-choice distractors come
    from feature values attested elsewhere in the corpus and never equal
    the key.  Raises EmptyScopeError when nothing survives the filters.
    """
    rng = random.Random(seed)
    pool = sorted(_target_pool(spec, corpus), key=lambda t: t.item_key)
    if not pool:
        raise EmptyScopeError(f"spec {spec.name!r}: scope matches nothing")

    def weight(target: _Target) -> float:
        if history is None:
            return 1.0
        return adaptive_weight(history.get(target.item_key))

    remaining: list[_Target] = []
    chosen: list[_Target] = []
    for _ in range(spec.question_count):
        if not remaining:
            remaining = list(pool)
        index = rng.choices(range(len(remaining)), [weight(t) for t in remaining])[0]
        chosen.append(remaining.pop(index))

    multiple_choice = (
        spec.choices_per_question >= 2 and spec.kind not in PARSING_KINDS
        and spec.kind is not Kind.TYPING
    )
    stock = _attested_values(spec, corpus) if multiple_choice else []

    questions = []
    for i, target in enumerate(chosen, start=1):
        answer_key: Union[str, dict[str, str]]
        if isinstance(target.answer, tuple):
            answer_key = dict(target.answer)
        else:
            answer_key = target.answer
        choices = None
        if multiple_choice:
            assert isinstance(answer_key, str)
            candidates = [v for v in stock if v != answer_key]
            take = min(spec.choices_per_question - 1, len(candidates))
            options = rng.sample(candidates, take) + [answer_key]
            if len(options) < 2:
                raise EmptyScopeError(
                    f"spec {spec.name!r}: no attested distractors for {answer_key!r}"
                )
            rng.shuffle(options)
            choices = tuple(options)
        questions.append(
            Question(
                id=f"q{i}-{target.item_key}",
                kind=spec.kind,
                item_key=target.item_key,
                prompt=target.prompt,
                prompt_translit=target.prompt_translit,
                answer_key=answer_key,
                target_monad=target.monad,
                target_lexeme=target.lexeme,
                asked_features=tuple(sorted(spec.asked_features)),
                choices=choices,
            )
        )
    return Exercise(spec=spec, seed=seed, questions=tuple(questions))


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


def _norm_answer(text: str) -> str:
    return unicodedata.normalize("NFC", text).strip()


def check(
    question: Question,
    submission: Union[str, Mapping[str, object]],
    elapsed: float,
) -> Feedback:
    """Compare a submission against the corpus-derived answer key.

    Feature answers compare by enumeration equality; string answers
    compare after NFC normalization and whitespace trimming.  The check is
    all-or-nothing at the question level while per-feature verdicts are
    kept for reporting.
    """
    if question.kind in PARSING_KINDS:
        if not isinstance(submission, Mapping):
            raise ShapeMismatchError(
                f"{question.kind.value} expects a feature map, got {type(submission).__name__}"
            )
        assert isinstance(question.answer_key, Mapping)
        per_feature = {}
        for feature in question.asked_features:
            expected = question.answer_key[feature]
            raw = submission.get(feature)
            got = None if raw is None else str(raw)
            per_feature[feature] = FeatureVerdict(
                correct=got == expected, expected=expected, got=got
            )
    else:
        if not isinstance(submission, str):
            raise ShapeMismatchError(
                f"{question.kind.value} expects a string answer, got {type(submission).__name__}"
            )
        assert isinstance(question.answer_key, str)
        feature = STRING_FEATURE[question.kind]
        expected = _norm_answer(question.answer_key)
        got = _norm_answer(submission)
        per_feature = {
            feature: FeatureVerdict(correct=got == expected, expected=expected, got=got)
        }
    overall = all(v.correct for v in per_feature.values())
    return Feedback(overall=overall, per_feature=per_feature, elapsed=elapsed)
