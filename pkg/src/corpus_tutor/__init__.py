"""Corpus-driven language-training engine.

Layers: an immutable annotated-corpus model (model), interchange-format
ingest (ingest), seeded exercise generation with oracle checking
(exercise), the session-statistics and reporting engine (stats), the
append-only event log (eventlog), the HTTP service (service), and the
operator CLI (cli).
"""

from importlib import resources

__version__ = "0.1.0"


def sample_corpus_text() -> str:
    """UTF-8 contents of the shipped Joshua 24:29-30,33 sample corpus."""
    return (
        resources.files("corpus_tutor.data").joinpath("joshua24.tsv").read_text("utf-8")
    )


def sample_translit_text() -> str:
    """UTF-8 contents of the shipped transliteration table."""
    return (
        resources.files("corpus_tutor.data").joinpath("translit.tsv").read_text("utf-8")
    )
