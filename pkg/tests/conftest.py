"""Shared fixtures: the shipped sample corpus and synthetic corpus builders."""

from __future__ import annotations

import random

import pytest

from corpus_tutor import sample_corpus_text, sample_translit_text
from corpus_tutor.ingest import TranslitTable, parse_corpus
from corpus_tutor.model import Corpus


@pytest.fixture(scope="session")
def sample_text() -> str:
    return sample_corpus_text()


@pytest.fixture(scope="session")
def translit_table() -> TranslitTable:
    return TranslitTable.parse(sample_translit_text())


@pytest.fixture(scope="session")
def sample_corpus(sample_text, translit_table) -> Corpus:
    corpus, report = parse_corpus(sample_text, translit_table)
    assert report.ok, report.errors
    assert corpus is not None
    return corpus


def make_rank_corpus_text(n_lexemes: int = 320, seed: int = 11) -> str:
    """One-word-per-sentence corpus with seeded token counts per lexeme.

    Lexeme ``lex0001``..``lexNNNN`` each get 1..6 occurrences; glosses are
    distinct per lexeme so every vocabulary question has distractor stock.
    """
    rng = random.Random(seed)
    tokens: list[str] = []
    for i in range(1, n_lexemes + 1):
        tokens.extend([f"lex{i:04d}"] * rng.randint(1, 6))
    rng.shuffle(tokens)
    lines = ["#corpus v1 books=Syn"]
    p_lines, c_lines, s_lines = [], [], []
    for monad, lexeme in enumerate(tokens, start=1):
        lines.append(
            "\t".join(
                [
                    "W", str(monad), "Syn", "1", str(monad),
                    f"w{monad}", f"t{monad}", lexeme, f"gloss of {lexeme}",
                    "noun", "-", "-", "-", "m", "sg", "absolute", "-", f"p{monad}",
                ]
            )
        )
        p_lines.append(f"P\tp{monad}\tc{monad}\t{monad}\t{monad}\tNP\tSubj")
        c_lines.append(f"C\tc{monad}\ts{monad}\t{monad}\t{monad}\tNmCl\t10\t0\t-")
        s_lines.append(f"S\ts{monad}\t{monad}\t{monad}")
    return "\n".join(lines + p_lines + c_lines + s_lines) + "\n"


@pytest.fixture(scope="session")
def rank_corpus() -> Corpus:
    corpus, report = parse_corpus(make_rank_corpus_text())
    assert report.ok, report.errors
    return corpus


def assert_corpus_invariants(corpus: Corpus) -> None:
    """Independent brute-force check of every corpus-model invariant."""
    monads = [w.monad for w in corpus.words]
    assert len(set(monads)) == len(monads), "duplicate monads"
    total = len(corpus.words)

    # Membership: each word in exactly one phrase -> clause -> sentence.
    for word in corpus.words:
        phrase = corpus.phrases[word.phrase_id]
        assert phrase.span.contains(word.monad)
        clause = corpus.clauses[phrase.clause_id]
        assert phrase.span.inside(clause.span)
        assert clause.sentence_id in corpus.sentences
        assert clause.span.inside(corpus.sentences[clause.sentence_id].span)

    # Partition: word counts summed per layer equal the word count.
    for spans in (
        [p.span for p in corpus.phrases.values()],
        [c.span for c in corpus.clauses.values()],
        [s.span for s in corpus.sentences.values()],
    ):
        covered = sorted(m for span in spans for m in span.monads())
        in_layer = [m for m in covered if corpus.has_monad(m)]
        assert len(in_layer) == len(set(in_layer)), "layer spans overlap"
        assert sum(1 for m in set(covered) if corpus.has_monad(m)) == total

    # Frequency ranks are a bijection onto 1..n and follow the sort rule.
    entries = sorted(corpus.lexicon.values(), key=lambda e: e.rank)
    assert [e.rank for e in entries] == list(range(1, len(entries) + 1))
    for a, b in zip(entries, entries[1:]):
        assert a.count > b.count or (a.count == b.count and a.citation < b.citation)

    # Clause mothers start earlier.
    for clause in corpus.clauses.values():
        if clause.mother_id is not None:
            assert corpus.clauses[clause.mother_id].span.first < clause.span.first
