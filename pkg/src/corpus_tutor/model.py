"""Immutable in-memory model of a hierarchically annotated corpus.

The corpus is a four-layer hierarchy -- words inside phrases inside clause
atoms inside sentences -- addressed by *monads* (1-based global word
positions) and by book/chapter/verse references.  Everything here is a pure
read over frozen data; a Corpus never changes after construction, so all
operations are safe under unrestricted concurrent access.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    InvertedRangeError,
    UnknownMonadError,
    UnknownReferenceError,
    UnmappedTenseError,
)


class Pos(str, enum.Enum):
    VERB = "verb"
    NOUN = "noun"
    PROPER_NOUN = "proper_noun"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"
    PREPOSITION = "preposition"
    CONJUNCTION = "conjunction"
    ARTICLE = "article"
    PRONOUN = "pronoun"
    PARTICLE = "particle"
    NEGATIVE = "negative"
    NUMERAL = "numeral"
    INTERJECTION = "interjection"


class Tense(str, enum.Enum):
    QATAL = "qatal"
    YIQTOL = "yiqtol"
    WAYYIQTOL = "wayyiqtol"
    IMPERATIVE = "imperative"
    INF_CONSTRUCT = "inf_construct"
    INF_ABSOLUTE = "inf_absolute"
    PARTICIPLE = "participle"


class Gender(str, enum.Enum):
    M = "m"
    F = "f"
    COMMON = "common"


class Number(str, enum.Enum):
    SG = "sg"
    PL = "pl"
    DUAL = "dual"


class State(str, enum.Enum):
    ABSOLUTE = "absolute"
    CONSTRUCT = "construct"


class Opener(str, enum.Enum):
    """How a clause atom opens: conjunction, relative marker, or nothing."""

    WAW = "waw"
    RELATIVE = "relative"
    NONE = "none"


# Open value sets: any other non-empty token is accepted as an "other" tag.
CORE_STEMS = frozenset(
    {"qal", "niphal", "piel", "pual", "hiphil", "hophal", "hithpael"}
)
CORE_LABELS = frozenset({"Way0", "WayX", "WXQt", "XQt", "xQt0", "NmCl"})
CORE_PHRASE_TYPES = frozenset({"NP", "VP", "PP", "AdvP", "AdjP", "CjP", "NegP"})
CORE_PHRASE_FUNCTIONS = frozenset(
    {"Subj", "Pred", "Objc", "Cmpl", "Time", "Loca", "Adju", "Modi", "Conj"}
)

#: Lexeme ids that open a relative clause in the shipped corpus convention.
RELATIVE_LEXEMES = frozenset({"ashr"})


@dataclass(frozen=True)
class VerseRef:
    book: str
    chapter: int
    verse: int

    def __post_init__(self) -> None:
        if not self.book:
            raise ValueError("book must be non-empty")
        if self.chapter < 1 or self.verse < 1:
            raise ValueError("chapter and verse must be >= 1")

    def __str__(self) -> str:
        return f"{self.book}.{self.chapter}.{self.verse}"

    @classmethod
    def parse(cls, text: str) -> "VerseRef":
        """Parse the canonical ``book.chapter.verse`` form."""
        parts = text.split(".")
        if len(parts) != 3:
            raise ValueError(f"bad verse reference: {text!r}")
        return cls(parts[0], int(parts[1]), int(parts[2]))


@dataclass(frozen=True)
class Span:
    """Inclusive, contiguous monad range."""

    first: int
    last: int

    def __post_init__(self) -> None:
        if self.first < 1 or self.last < self.first:
            raise ValueError(f"bad span {self.first}..{self.last}")

    def __len__(self) -> int:
        return self.last - self.first + 1

    def contains(self, monad: int) -> bool:
        return self.first <= monad <= self.last

    def overlaps(self, other: "Span") -> bool:
        return self.first <= other.last and other.first <= self.last

    def inside(self, other: "Span") -> bool:
        return other.first <= self.first and self.last <= other.last

    def monads(self) -> range:
        return range(self.first, self.last + 1)


@dataclass(frozen=True)
class Word:
    monad: int
    verse: VerseRef
    surface: str
    translit: str
    lexeme_id: str
    gloss: str
    pos: Pos
    stem: Optional[str]
    tense: Optional[Tense]
    person: Optional[int]
    gender: Optional[Gender]
    number: Optional[Number]
    state: Optional[State]
    verb_class: frozenset[str]
    phrase_id: str


@dataclass(frozen=True)
class Phrase:
    id: str
    clause_id: str
    span: Span
    phrase_type: str
    function: str


@dataclass(frozen=True)
class ClauseAtom:
    id: str
    sentence_id: str
    span: Span
    label: str
    ctc: str
    tab_depth: int
    mother_id: Optional[str]


@dataclass(frozen=True)
class Sentence:
    id: str
    span: Span
    clause_ids: tuple[str, ...]


@dataclass(frozen=True)
class LexiconEntry:
    lexeme_id: str
    citation: str
    gloss: str
    count: int
    rank: int


class Corpus:
    """Indexed, immutable container for one ingested corpus.

    Construction assumes the inputs already satisfy the hierarchy
    invariants; validation lives in :mod:`corpus_tutor.ingest`.
    """

    def __init__(
        self,
        *,
        books: Sequence[str],
        words: Iterable[Word],
        phrases: Mapping[str, Phrase],
        clauses: Mapping[str, ClauseAtom],
        sentences: Mapping[str, Sentence],
        lexicon: Mapping[str, LexiconEntry],
    ) -> None:
        self.books: tuple[str, ...] = tuple(books)
        self.words: tuple[Word, ...] = tuple(sorted(words, key=lambda w: w.monad))
        self.phrases: dict[str, Phrase] = dict(phrases)
        self.clauses: dict[str, ClauseAtom] = dict(clauses)
        self.sentences: dict[str, Sentence] = dict(sentences)
        self.lexicon: dict[str, LexiconEntry] = dict(lexicon)

        self._book_index = {b: i for i, b in enumerate(self.books)}
        self._word_by_monad = {w.monad: w for w in self.words}
        self._clauses_in_order = tuple(
            sorted(self.clauses.values(), key=lambda c: c.span.first)
        )
        self._clause_of_monad: dict[int, str] = {}
        for clause in self.clauses.values():
            for m in clause.span.monads():
                self._clause_of_monad[m] = clause.id
        self._verses: set[tuple[str, int, int]] = {
            (w.verse.book, w.verse.chapter, w.verse.verse) for w in self.words
        }

    # -- lookups -----------------------------------------------------------

    def word(self, monad: int) -> Word:
        try:
            return self._word_by_monad[monad]
        except KeyError:
            raise UnknownMonadError(f"no word at monad {monad}") from None

    def has_monad(self, monad: int) -> bool:
        return monad in self._word_by_monad

    def phrase_of(self, monad: int) -> Phrase:
        return self.phrases[self.word(monad).phrase_id]

    def clause_of(self, monad: int) -> ClauseAtom:
        word = self.word(monad)
        return self.clauses[self._clause_of_monad[word.monad]]

    def sentence_of(self, monad: int) -> Sentence:
        return self.sentences[self.clause_of(monad).sentence_id]

    def clause_words(self, clause: ClauseAtom) -> tuple[Word, ...]:
        return tuple(
            self._word_by_monad[m]
            for m in clause.span.monads()
            if m in self._word_by_monad
        )

    def clauses_in_order(self) -> tuple[ClauseAtom, ...]:
        return self._clauses_in_order

    # -- verse addressing --------------------------------------------------

    def verse_key(self, ref: VerseRef) -> tuple[int, int, int]:
        """Canonical sort key; book order comes from the corpus header."""
        try:
            book = self._book_index[ref.book]
        except KeyError:
            raise UnknownReferenceError(f"unknown book {ref.book!r}") from None
        return (book, ref.chapter, ref.verse)

    def has_verse(self, ref: VerseRef) -> bool:
        return (ref.book, ref.chapter, ref.verse) in self._verses

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"Corpus(words={len(self.words)}, phrases={len(self.phrases)}, "
            f"clauses={len(self.clauses)}, sentences={len(self.sentences)})"
        )


# ---------------------------------------------------------------------------
# Pure derivations
# ---------------------------------------------------------------------------


def feature_bundle(corpus: Corpus, monad: int) -> dict[str, object]:
    """Every stored feature of the word at ``monad``.

    This is the hover pop-up payload: all word fields plus the owning
    phrase's type and function, the owning clause's label/code/indentation,
    and the sentence id.  Raises UnknownMonadError for absent monads.
    """
    word = corpus.word(monad)
    phrase = corpus.phrase_of(monad)
    clause = corpus.clause_of(monad)
    entry = corpus.lexicon.get(word.lexeme_id)
    return {
        "monad": word.monad,
        "book": word.verse.book,
        "chapter": word.verse.chapter,
        "verse": word.verse.verse,
        "surface": word.surface,
        "translit": word.translit,
        "lexeme_id": word.lexeme_id,
        "gloss": word.gloss,
        "pos": word.pos.value,
        "stem": word.stem,
        "tense": word.tense.value if word.tense else None,
        "person": word.person,
        "gender": word.gender.value if word.gender else None,
        "number": word.number.value if word.number else None,
        "state": word.state.value if word.state else None,
        "verb_class": tuple(sorted(word.verb_class)),
        "phrase_id": word.phrase_id,
        "phrase_type": phrase.phrase_type,
        "phrase_function": phrase.function,
        "clause_id": clause.id,
        "clause_label": clause.label,
        "clause_ctc": clause.ctc,
        "clause_tab_depth": clause.tab_depth,
        "sentence_id": clause.sentence_id,
        "frequency_rank": entry.rank if entry else None,
        "frequency_count": entry.count if entry else None,
    }


@dataclass(frozen=True)
class TextRow:
    """One clause atom of a text slice, with its words."""

    clause: ClauseAtom
    words: tuple[Word, ...]


def text_slice(corpus: Corpus, from_ref: VerseRef, to_ref: VerseRef) -> list[TextRow]:
    """Clause atoms whose span intersects the verse range, in monad order."""
    lo = corpus.verse_key(from_ref)
    hi = corpus.verse_key(to_ref)
    if lo > hi:
        raise InvertedRangeError(f"range {from_ref} .. {to_ref} is inverted")
    for ref in (from_ref, to_ref):
        if not corpus.has_verse(ref):
            raise UnknownReferenceError(f"verse {ref} not in corpus")
    in_range = {
        w.monad for w in corpus.words if lo <= corpus.verse_key(w.verse) <= hi
    }
    rows = []
    for clause in corpus.clauses_in_order():
        if any(m in in_range for m in clause.span.monads()):
            rows.append(TextRow(clause=clause, words=corpus.clause_words(clause)))
    return rows


# ---------------------------------------------------------------------------
# Clause-type codes and labels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DigitTable:
    """Digit maps for clause-type codes.

    Only the digits attested in the source material ship by default;
    the table is extension-ready via :func:`load_digit_table`.
    """

    opener_digits: Mapping[Opener, str] = field(
        default_factory=lambda: {Opener.WAW: "4", Opener.RELATIVE: "1"}
    )
    tense_digits: Mapping[Optional[Tense], str] = field(
        default_factory=lambda: {
            None: "0",
            Tense.QATAL: "2",
            Tense.YIQTOL: "7",
            Tense.WAYYIQTOL: "7",
        }
    )


DEFAULT_DIGIT_TABLE = DigitTable()


def load_digit_table(lines: Iterable[str]) -> DigitTable:
    """Extend the default digit table from ``kind:key=digit`` config lines.

    Example: ``opener:none=2`` or ``tense:imperative=5``. Blank lines and
    ``#`` comments are ignored.
    """
    openers = dict(DEFAULT_DIGIT_TABLE.opener_digits)
    tenses = dict(DEFAULT_DIGIT_TABLE.tense_digits)
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, digit = line.partition("=")
        kind, _, key = head.partition(":")
        if not digit.isdigit() or len(digit) != 1:
            raise ValueError(f"bad digit table line: {raw!r}")
        if kind == "opener":
            openers[Opener(key)] = digit
        elif kind == "tense":
            tenses[None if key == "none" else Tense(key)] = digit
        else:
            raise ValueError(f"bad digit table line: {raw!r}")
    return DigitTable(opener_digits=openers, tense_digits=tenses)


def _tense_digit(tense: Optional[Tense], table: DigitTable, role: str) -> str:
    try:
        return table.tense_digits[tense]
    except KeyError:
        name = tense.value if tense else "none"
        raise UnmappedTenseError(f"no digit for {role} tense {name!r}") from None


def derive_ctc(
    opener: Opener,
    own_tense: Optional[Tense],
    mother_tense: Optional[Tense] = None,
    table: DigitTable = DEFAULT_DIGIT_TABLE,
) -> str:
    """Clause-type code from opener and tense digits.

    Conjunction-opened codes are opener+own+mother (three digits); relative
    codes are opener+own (two digits).  ``None`` stands for a verbless
    clause and maps to digit 0.  A relative opener must not be given a
    mother tense.  Openers or tenses missing from the table raise
    UnmappedTenseError.
    """
    try:
        head = table.opener_digits[opener]
    except KeyError:
        raise UnmappedTenseError(f"no digit for opener {opener.value!r}") from None
    own = _tense_digit(own_tense, table, "own")
    if opener is Opener.RELATIVE:
        if mother_tense is not None:
            raise ValueError("relative opener takes no mother tense")
        return head + own
    return head + own + _tense_digit(mother_tense, table, "mother")


def derive_clause_label(
    has_explicit_subject: bool,
    own_tense: Optional[Tense],
    has_conjunction: bool,
) -> str:
    """Clause-atom display label from surface features.

    Covers the attested label inventory; unmapped combinations fall back
    to a generated ``other:`` tag rather than raising.
    """
    if own_tense is Tense.WAYYIQTOL:
        return "WayX" if has_explicit_subject else "Way0"
    if own_tense is Tense.QATAL:
        if has_explicit_subject:
            return "WXQt" if has_conjunction else "XQt"
        return "xQt0"
    if own_tense is None:
        return "NmCl"
    subj = "X" if has_explicit_subject else "0"
    conj = "W" if has_conjunction else ""
    return f"other:{conj}{subj}{own_tense.value}"


def clause_tense(corpus: Corpus, clause: ClauseAtom) -> Optional[Tense]:
    """Tense of the clause's (first) verb; None for verbless clauses."""
    for word in corpus.clause_words(clause):
        if word.pos is Pos.VERB:
            return word.tense
    return None


def clause_opener(
    corpus: Corpus,
    clause: ClauseAtom,
    relative_lexemes: frozenset[str] = RELATIVE_LEXEMES,
) -> Opener:
    """Classify how a clause atom opens.

    A clause-initial conjunction is a relative opener when its lexeme is in
    ``relative_lexemes``, otherwise the (narrative) conjunction opener; a
    wayyiqtol verb carries its conjunction in the verb form itself.
    """
    words = corpus.clause_words(clause)
    if not words:
        return Opener.NONE
    first = words[0]
    if first.pos is Pos.CONJUNCTION:
        if first.lexeme_id in relative_lexemes:
            return Opener.RELATIVE
        return Opener.WAW
    if first.pos is Pos.VERB and first.tense is Tense.WAYYIQTOL:
        return Opener.WAW
    return Opener.NONE


def has_explicit_subject(corpus: Corpus, clause: ClauseAtom) -> bool:
    return any(
        corpus.phrases[w.phrase_id].function == "Subj"
        for w in corpus.clause_words(clause)
    )


def clause_code_inputs(
    corpus: Corpus,
    clause: ClauseAtom,
    relative_lexemes: frozenset[str] = RELATIVE_LEXEMES,
) -> tuple[Opener, Optional[Tense], Optional[Tense]]:
    """Extract (opener, own tense, mother tense) for code derivation.

    The mother tense comes from the mother clause's verb.  A
    conjunction-opened clause whose mother lies outside the corpus window
    falls back to its own tense: narrative openings continue the chain they
    stand in, and the window cannot show what it does not contain.
    """
    opener = clause_opener(corpus, clause, relative_lexemes)
    own = clause_tense(corpus, clause)
    if opener is Opener.RELATIVE:
        return opener, own, None
    if clause.mother_id is not None:
        mother = corpus.clauses[clause.mother_id]
        return opener, own, clause_tense(corpus, mother)
    return opener, own, own


def recompute_ctc(
    corpus: Corpus,
    clause: ClauseAtom,
    table: DigitTable = DEFAULT_DIGIT_TABLE,
    relative_lexemes: frozenset[str] = RELATIVE_LEXEMES,
) -> str:
    """Re-derive a clause's code from its stored features."""
    opener, own, mother = clause_code_inputs(corpus, clause, relative_lexemes)
    return derive_ctc(opener, own, mother, table)
