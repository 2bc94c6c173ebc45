"""Parsing, validation, and enrichment of the corpus interchange format.

The interchange file is UTF-8 text: a header line

    #corpus v1 books=<comma-separated canonical book order>

followed by one tab-separated record per line, type-prefixed W/P/C/S (see
the record writers at the bottom for the exact column layout).  Parsing is
collect-all: every diagnosable problem lands in the IngestReport with its
line number and rule id, and a Corpus is produced only when there are no
errors.  All text fields are normalization-form-C normalized on ingest.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    ClauseAtom,
    Corpus,
    Gender,
    LexiconEntry,
    Number,
    Phrase,
    Pos,
    Sentence,
    Span,
    State,
    Tense,
    VerseRef,
    Word,
)

ABSENT = "-"

W_COLUMNS = 18
P_COLUMNS = 7
C_COLUMNS = 9
S_COLUMNS = 4


@dataclass(frozen=True)
class Diagnostic:
    line: int
    rule: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: [{self.rule}] {self.message}"


@dataclass
class IngestReport:
    word_count: int = 0
    phrase_count: int = 0
    clause_count: int = 0
    sentence_count: int = 0
    errors: list[Diagnostic] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, line: int, rule: str, message: str) -> None:
        self.errors.append(Diagnostic(line, rule, message))

    def warn(self, line: int, rule: str, message: str) -> None:
        self.warnings.append(Diagnostic(line, rule, message))


# ---------------------------------------------------------------------------
# Transliteration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TranslitResult:
    text: str
    unmatched: tuple[str, ...]


class TranslitTable:
    """Ordered grapheme-sequence mapping applied by leftmost longest match.

    Keys and values are NFC-normalized.  Graphemes with no matching key
    pass through unchanged and are reported in TranslitResult.unmatched.
    """

    def __init__(self, mapping: Iterable[tuple[str, str]]) -> None:
        table: dict[str, str] = {}
        for key, value in mapping:
            key = unicodedata.normalize("NFC", key)
            if not key:
                raise ValueError("transliteration keys must be non-empty")
            if key in table and table[key] != value:
                raise ValueError(f"duplicate transliteration key {key!r}")
            table[key] = unicodedata.normalize("NFC", value)
        self.mapping = table
        self._max_key = max((len(k) for k in table), default=0)

    @classmethod
    def parse(cls, text: str) -> "TranslitTable":
        """Parse ``grapheme<TAB>romanization`` lines; # comments allowed."""
        pairs = []
        for raw in text.splitlines():
            if not raw.strip() or raw.startswith("#"):
                continue
            cells = raw.split("\t")
            if len(cells) != 2:
                raise ValueError(f"bad transliteration line: {raw!r}")
            pairs.append((cells[0], cells[1]))
        return cls(pairs)

    def apply(self, surface: str) -> TranslitResult:
        s = unicodedata.normalize("NFC", surface)
        out: list[str] = []
        unmatched: list[str] = []
        i = 0
        while i < len(s):
            for width in range(min(self._max_key, len(s) - i), 0, -1):
                candidate = s[i : i + width]
                if candidate in self.mapping:
                    out.append(self.mapping[candidate])
                    i += width
                    break
            else:
                out.append(s[i])
                unmatched.append(s[i])
                i += 1
        return TranslitResult(text="".join(out), unmatched=tuple(unmatched))


def transliterate(surface: str, table: TranslitTable) -> str:
    """Deterministic left-to-right longest-match romanization."""
    return table.apply(surface).text


# ---------------------------------------------------------------------------
# Frequency ranks
# ---------------------------------------------------------------------------


def compute_frequency_ranks(words: Iterable[Word]) -> dict[str, LexiconEntry]:
    """Build the lexicon with 1-based frequency ranks.

    Sort is by descending token count, ties broken by ascending citation
    form.  The v1 interchange format carries no separate lexicon records,
    so the citation form is the lexeme id itself.
    """
    counts: dict[str, int] = {}
    gloss: dict[str, str] = {}
    for word in words:
        counts[word.lexeme_id] = counts.get(word.lexeme_id, 0) + 1
        gloss.setdefault(word.lexeme_id, word.gloss)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return {
        lex: LexiconEntry(
            lexeme_id=lex, citation=lex, gloss=gloss[lex], count=n, rank=i + 1
        )
        for i, (lex, n) in enumerate(ordered)
    }


# ---------------------------------------------------------------------------
# Record-level parsing helpers
# ---------------------------------------------------------------------------


def _norm(cell: str) -> str:
    return unicodedata.normalize("NFC", cell)


def _opt(cell: str) -> Optional[str]:
    return None if cell == ABSENT else _norm(cell)


def _int_cell(cell: str, what: str) -> int:
    try:
        value = int(cell)
    except ValueError:
        raise ValueError(f"{what} must be an integer, got {cell!r}") from None
    return value


def _enum_cell(cell: str, enum_cls, what: str):
    try:
        return enum_cls(cell)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ValueError(f"{what} must be one of {allowed}; got {cell!r}") from None


@dataclass
class _RawWord:
    line: int
    word: Word
    translit_missing: bool


def _parse_word(line_no: int, cells: list[str], report: IngestReport) -> Optional[_RawWord]:
    try:
        monad = _int_cell(cells[1], "monad")
        if monad < 1:
            raise ValueError(f"monad must be positive, got {monad}")
        chapter = _int_cell(cells[3], "chapter")
        verse_no = _int_cell(cells[4], "verse")
        ref = VerseRef(_norm(cells[2]), chapter, verse_no)
        pos = _enum_cell(cells[9], Pos, "pos")
        stem = _opt(cells[10])
        tense_cell = _opt(cells[11])
        tense = _enum_cell(tense_cell, Tense, "tense") if tense_cell else None
        person_cell = _opt(cells[12])
        person = None
        if person_cell is not None:
            person = _int_cell(person_cell, "person")
            if person not in (1, 2, 3):
                raise ValueError(f"person must be 1, 2 or 3; got {person}")
        gender_cell = _opt(cells[13])
        gender = _enum_cell(gender_cell, Gender, "gender") if gender_cell else None
        number_cell = _opt(cells[14])
        number = _enum_cell(number_cell, Number, "number") if number_cell else None
        state_cell = _opt(cells[15])
        state = _enum_cell(state_cell, State, "state") if state_cell else None
        vc_cell = _opt(cells[16])
        verb_class = frozenset(vc_cell.split("+")) if vc_cell else frozenset()
        translit = _opt(cells[6])
        word = Word(
            monad=monad,
            verse=ref,
            surface=_norm(cells[5]),
            translit=translit or "",
            lexeme_id=_norm(cells[7]),
            gloss=_norm(cells[8]),
            pos=pos,
            stem=stem,
            tense=tense,
            person=person,
            gender=gender,
            number=number,
            state=state,
            verb_class=verb_class,
            phrase_id=_norm(cells[17]),
        )
    except ValueError as exc:
        report.error(line_no, "syntax", str(exc))
        return None
    return _RawWord(line=line_no, word=word, translit_missing=translit is None)


def _parse_span(first_cell: str, last_cell: str) -> Span:
    return Span(_int_cell(first_cell, "first monad"), _int_cell(last_cell, "last monad"))


# ---------------------------------------------------------------------------
# parse_corpus
# ---------------------------------------------------------------------------


def parse_corpus(
    data: bytes | str,
    translit_table: Optional[TranslitTable] = None,
) -> tuple[Optional[Corpus], IngestReport]:
    """Parse and validate an interchange file.

    Returns ``(corpus, report)``; the corpus is None whenever the report
    carries errors.  When a word row has no translit field and a table is
    given, the romanization is derived by longest-match substitution.
    """
    report = IngestReport()
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#corpus v1 "):
        report.error(1, "header", "first line must be '#corpus v1 books=...'")
        return None, report
    header = lines[0][len("#corpus v1 ") :].strip()
    if not header.startswith("books="):
        report.error(1, "header", "header must carry books=<order>")
        return None, report
    books = [
        _norm(b.strip()) for b in header[len("books=") :].split(",") if b.strip()
    ]
    if not books:
        report.error(1, "header", "book order is empty")

    raw_words: list[_RawWord] = []
    phrases: dict[str, Phrase] = {}
    clauses: dict[str, ClauseAtom] = {}
    sentences_raw: dict[str, tuple[int, Span]] = {}
    lines_of: dict[str, int] = {}

    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip() or raw.startswith("#"):
            continue
        cells = raw.split("\t")
        kind = cells[0]
        if kind == "W":
            if len(cells) != W_COLUMNS:
                report.error(
                    line_no, "syntax", f"W record needs {W_COLUMNS} columns, got {len(cells)}"
                )
                continue
            parsed = _parse_word(line_no, cells, report)
            if parsed:
                raw_words.append(parsed)
        elif kind == "P":
            if len(cells) != P_COLUMNS:
                report.error(
                    line_no, "syntax", f"P record needs {P_COLUMNS} columns, got {len(cells)}"
                )
                continue
            try:
                phrase = Phrase(
                    id=_norm(cells[1]),
                    clause_id=_norm(cells[2]),
                    span=_parse_span(cells[3], cells[4]),
                    phrase_type=_norm(cells[5]),
                    function=_norm(cells[6]),
                )
            except ValueError as exc:
                report.error(line_no, "syntax", str(exc))
                continue
            if phrase.id in phrases:
                report.error(line_no, "dup-id", f"duplicate phrase id {phrase.id!r}")
                continue
            phrases[phrase.id] = phrase
            lines_of[f"P:{phrase.id}"] = line_no
        elif kind == "C":
            if len(cells) != C_COLUMNS:
                report.error(
                    line_no, "syntax", f"C record needs {C_COLUMNS} columns, got {len(cells)}"
                )
                continue
            try:
                tab_depth = _int_cell(cells[7], "tab_depth")
                if tab_depth < 0:
                    raise ValueError("tab_depth must be >= 0")
                clause = ClauseAtom(
                    id=_norm(cells[1]),
                    sentence_id=_norm(cells[2]),
                    span=_parse_span(cells[3], cells[4]),
                    label=_norm(cells[5]),
                    ctc=_norm(cells[6]),
                    tab_depth=tab_depth,
                    mother_id=_opt(cells[8]),
                )
            except ValueError as exc:
                report.error(line_no, "syntax", str(exc))
                continue
            if clause.id in clauses:
                report.error(line_no, "dup-id", f"duplicate clause id {clause.id!r}")
                continue
            clauses[clause.id] = clause
            lines_of[f"C:{clause.id}"] = line_no
        elif kind == "S":
            if len(cells) != S_COLUMNS:
                report.error(
                    line_no, "syntax", f"S record needs {S_COLUMNS} columns, got {len(cells)}"
                )
                continue
            sid = _norm(cells[1])
            try:
                span = _parse_span(cells[2], cells[3])
            except ValueError as exc:
                report.error(line_no, "syntax", str(exc))
                continue
            if sid in sentences_raw:
                report.error(line_no, "dup-id", f"duplicate sentence id {sid!r}")
                continue
            sentences_raw[sid] = (line_no, span)
        else:
            report.error(line_no, "syntax", f"unknown record type {kind!r}")

    words = _check_words(raw_words, books, translit_table, report)
    _check_hierarchy(words, phrases, clauses, sentences_raw, report)

    report.word_count = len(words)
    report.phrase_count = len(phrases)
    report.clause_count = len(clauses)
    report.sentence_count = len(sentences_raw)
    if not report.ok:
        return None, report

    sentences = {
        sid: Sentence(
            id=sid,
            span=span,
            clause_ids=tuple(
                c.id
                for c in sorted(clauses.values(), key=lambda c: c.span.first)
                if c.sentence_id == sid
            ),
        )
        for sid, (_, span) in sentences_raw.items()
    }
    corpus = Corpus(
        books=books,
        words=words,
        phrases=phrases,
        clauses=clauses,
        sentences=sentences,
        lexicon=compute_frequency_ranks(words),
    )
    return corpus, report


def _check_words(
    raw_words: list[_RawWord],
    books: list[str],
    table: Optional[TranslitTable],
    report: IngestReport,
) -> list[Word]:
    words: list[Word] = []
    seen: dict[int, int] = {}
    for raw in raw_words:
        word = raw.word
        if word.monad in seen:
            report.error(
                raw.line,
                "dup-monad",
                f"monad {word.monad} already defined on line {seen[word.monad]}",
            )
            continue
        seen[word.monad] = raw.line
        if books and word.verse.book not in books:
            report.error(
                raw.line, "unknown-book", f"book {word.verse.book!r} not in header order"
            )
            continue
        is_verb = word.pos is Pos.VERB
        has_morph = word.stem is not None and word.tense is not None
        if is_verb != has_morph:
            report.error(
                raw.line,
                "verb-morph",
                f"monad {word.monad}: pos=verb requires stem and tense (and only verbs carry them)",
            )
            continue
        if raw.translit_missing and table is not None and word.surface:
            result = table.apply(word.surface)
            for grapheme in result.unmatched:
                report.warn(
                    raw.line,
                    "translit-gap",
                    f"monad {word.monad}: no mapping for {grapheme!r} (U+{ord(grapheme):04X})",
                )
            word = Word(**{**word.__dict__, "translit": result.text})
        if word.surface and not word.translit:
            report.error(
                raw.line,
                "translit-missing",
                f"monad {word.monad}: translit required when surface is present",
            )
            continue
        words.append(word)
    return words


def _check_hierarchy(
    words: list[Word],
    phrases: dict[str, Phrase],
    clauses: dict[str, ClauseAtom],
    sentences_raw: dict[str, tuple[int, Span]],
    report: IngestReport,
) -> None:
    word_by_monad = {w.monad: w for w in words}

    for word in words:
        phrase = phrases.get(word.phrase_id)
        if phrase is None:
            report.error(
                0, "unknown-phrase", f"monad {word.monad} references phrase {word.phrase_id!r}"
            )
        elif not phrase.span.contains(word.monad):
            report.error(
                0,
                "span-outside",
                f"monad {word.monad} lies outside its phrase {phrase.id!r} span",
            )

    for phrase in phrases.values():
        clause = clauses.get(phrase.clause_id)
        if clause is None:
            report.error(
                0, "unknown-clause", f"phrase {phrase.id!r} references clause {phrase.clause_id!r}"
            )
        elif not phrase.span.inside(clause.span):
            report.error(
                0, "span-outside", f"phrase {phrase.id!r} span leaves clause {clause.id!r}"
            )
        for m in phrase.span.monads():
            w = word_by_monad.get(m)
            if w is not None and w.phrase_id != phrase.id:
                report.error(
                    0,
                    "span-overlap",
                    f"monad {m} sits in phrase {phrase.id!r} span but belongs to {w.phrase_id!r}",
                )

    for clause in clauses.values():
        if clause.sentence_id not in sentences_raw:
            report.error(
                0,
                "unknown-sentence",
                f"clause {clause.id!r} references sentence {clause.sentence_id!r}",
            )
        elif not clause.span.inside(sentences_raw[clause.sentence_id][1]):
            report.error(
                0, "span-outside", f"clause {clause.id!r} span leaves its sentence"
            )
        if len(clause.ctc) == 3:
            if clause.ctc[0] != "4":
                report.error(
                    0, "ctc-shape", f"clause {clause.id!r}: 3-digit code must start with 4"
                )
        elif len(clause.ctc) == 2:
            if clause.ctc[0] != "1":
                report.error(
                    0, "ctc-shape", f"clause {clause.id!r}: 2-digit code must start with 1"
                )
        else:
            report.error(
                0, "ctc-shape", f"clause {clause.id!r}: code must be 2 or 3 digits"
            )
        if not clause.ctc.isdigit():
            report.error(0, "ctc-shape", f"clause {clause.id!r}: code must be decimal digits")
        if clause.mother_id is not None:
            mother = clauses.get(clause.mother_id)
            if mother is None:
                report.error(
                    0, "mother", f"clause {clause.id!r} references unknown mother"
                )
            elif mother.span.first >= clause.span.first:
                report.error(
                    0, "mother", f"clause {clause.id!r}: mother must start earlier"
                )

    for layer, spans in (
        ("phrase", [(p.id, p.span) for p in phrases.values()]),
        ("clause", [(c.id, c.span) for c in clauses.values()]),
        ("sentence", [(s, span) for s, (_, span) in sentences_raw.items()]),
    ):
        ordered = sorted(spans, key=lambda kv: kv[1].first)
        for (id_a, a), (id_b, b) in zip(ordered, ordered[1:]):
            if a.overlaps(b):
                report.error(
                    0, "span-overlap", f"{layer} spans {id_a!r} and {id_b!r} overlap"
                )

    # Partition: each sentence span must be exactly tiled by its clauses.
    for sid, (line_no, span) in sentences_raw.items():
        owned = sorted(
            (c.span for c in clauses.values() if c.sentence_id == sid),
            key=lambda s: s.first,
        )
        expect = span.first
        for s in owned:
            if s.first != expect:
                report.error(
                    line_no, "partition", f"sentence {sid!r}: clause spans leave a gap"
                )
                break
            expect = s.last + 1
        else:
            if owned and expect != span.last + 1:
                report.error(
                    line_no, "partition", f"sentence {sid!r}: clause spans stop short"
                )
            if not owned:
                report.error(line_no, "partition", f"sentence {sid!r} has no clauses")

    # Every monad of every clause must carry a word (no holes in the text).
    for clause in clauses.values():
        for m in clause.span.monads():
            if m not in word_by_monad:
                report.error(
                    0, "partition", f"clause {clause.id!r}: no word at monad {m}"
                )
                break


# ---------------------------------------------------------------------------
# Serialization (canonical form; inverse of parse_corpus modulo ordering)
# ---------------------------------------------------------------------------


def _cell(value: Optional[str]) -> str:
    return value if value else ABSENT


def serialize_corpus(corpus: Corpus) -> str:
    lines = [f"#corpus v1 books={','.join(corpus.books)}"]
    for w in corpus.words:
        lines.append(
            "\t".join(
                [
                    "W",
                    str(w.monad),
                    w.verse.book,
                    str(w.verse.chapter),
                    str(w.verse.verse),
                    w.surface,
                    w.translit,
                    w.lexeme_id,
                    w.gloss,
                    w.pos.value,
                    _cell(w.stem),
                    _cell(w.tense.value if w.tense else None),
                    _cell(str(w.person) if w.person else None),
                    _cell(w.gender.value if w.gender else None),
                    _cell(w.number.value if w.number else None),
                    _cell(w.state.value if w.state else None),
                    _cell("+".join(sorted(w.verb_class))),
                    w.phrase_id,
                ]
            )
        )
    for p in sorted(corpus.phrases.values(), key=lambda p: p.span.first):
        lines.append(
            "\t".join(
                ["P", p.id, p.clause_id, str(p.span.first), str(p.span.last), p.phrase_type, p.function]
            )
        )
    for c in sorted(corpus.clauses.values(), key=lambda c: c.span.first):
        lines.append(
            "\t".join(
                [
                    "C",
                    c.id,
                    c.sentence_id,
                    str(c.span.first),
                    str(c.span.last),
                    c.label,
                    c.ctc,
                    str(c.tab_depth),
                    _cell(c.mother_id),
                ]
            )
        )
    for s in sorted(corpus.sentences.values(), key=lambda s: s.span.first):
        lines.append("\t".join(["S", s.id, str(s.span.first), str(s.span.last)]))
    return "\n".join(lines) + "\n"
