#!/usr/bin/env python3
"""Regenerate the shipped sample corpus and transliteration table.

Surfaces are composed from named codepoint constants (never pasted), NFC
normalized, and the translit column is produced by running the shipped
table over each surface, so file and table cannot drift apart.  Run from
the repo root:

    python tools/build_sample_corpus.py
"""

from __future__ import annotations

import unicodedata
from pathlib import Path

# Letters
ALEF, BET, GIMEL, DALET, HE, VAV, ZAYIN, HET, TET, YOD = (
    "א", "ב", "ג", "ד", "ה",
    "ו", "ז", "ח", "ט", "י",
)
KAF_F, KAF, LAMED, MEM_F, MEM, NUN_F, NUN, SAMEKH, AYIN = (
    "ך", "כ", "ל", "ם", "מ",
    "ן", "נ", "ס", "ע",
)
PE_F, PE, TSADI_F, TSADI, QOF, RESH, SHIN, TAV = (
    "ף", "פ", "ץ", "צ", "ק", "ר", "ש", "ת",
)
# Points
SHEVA, HATAF_SEGOL, HATAF_PATAH, HATAF_QAMATS = "ְ", "ֱ", "ֲ", "ֳ"
HIRIQ, TSERE, SEGOL, PATAH, QAMATS, HOLAM, QUBUTS = (
    "ִ", "ֵ", "ֶ", "ַ", "ָ", "ֹ", "ֻ",
)
DAGESH, SHIN_DOT, SIN_DOT, QAMATS_QATAN = "ּ", "ׁ", "ׂ", "ׇ"


def nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


TABLE: list[tuple[str, str]] = [
    # Single letters (spirantized/soft values; dagesh handled by overrides)
    (ALEF, "ʔ"), (BET, "v"), (GIMEL, "g"), (DALET, "d"), (HE, "h"),
    (VAV, "w"), (ZAYIN, "z"), (HET, "ḥ"), (TET, "ṭ"), (YOD, "y"),
    (KAF, "kh"), (KAF_F, "kh"), (LAMED, "l"), (MEM, "m"), (MEM_F, "m"),
    (NUN, "n"), (NUN_F, "n"), (SAMEKH, "s"), (AYIN, "ʕ"), (PE, "f"),
    (PE_F, "f"), (TSADI, "ṣ"), (TSADI_F, "ṣ"), (QOF, "q"),
    (RESH, "r"), (SHIN, "š"), (TAV, "t"),
    # Single points
    (SHEVA, "ə"), (HATAF_SEGOL, "ĕ"), (HATAF_PATAH, "ă"),
    (HATAF_QAMATS, "ŏ"), (HIRIQ, "i"), (TSERE, "ē"), (SEGOL, "e"),
    (PATAH, "a"), (QAMATS, "ā"), (HOLAM, "ō"), (QUBUTS, "u"),
    (QAMATS_QATAN, "o"), (DAGESH, ""), (SHIN_DOT, ""), (SIN_DOT, ""),
    # Plosive begadkefat under dagesh (NFC puts the vowel before the dagesh)
    (BET + HIRIQ + DAGESH, "bi"), (BET + SEGOL + DAGESH, "be"),
    (BET + SHEVA + DAGESH, "bə"),
    (PE + HIRIQ + DAGESH + YOD, "pî"),
    (TAV + PATAH + DAGESH, "tta"),
    # Gemination
    (YOD + QAMATS + DAGESH, "yyā"), (YOD + HIRIQ + DAGESH, "yyi"),
    (LAMED + SEGOL + DAGESH, "lle"), (TSADI + SHEVA + DAGESH, "ṣṣə"),
    # Matres lectionis
    (HE + HIRIQ + YOD, "hî"), (RESH + TSERE + YOD, "rê"),
    (RESH + HIRIQ + YOD, "rî"), (NUN + HIRIQ + YOD, "nî"),
    (VAV + HOLAM, "ô"), (VAV + DAGESH, "û"),
    # Furtive patah: word-final ayin, with longer keys for mid-word cases
    (AYIN + PATAH, "aʕ"),
    (AYIN + PATAH + SHIN + SHIN_DOT, "ʕaš"),
    (AYIN + PATAH + TAV, "ʕat"),
    # Silent shevas attested in this corpus
    (QOF + SHEVA, "q"), (MEM + SHEVA, "m"), (PE + SHEVA, "f"),
    (NUN + SHEVA, "n"), (BET + SHEVA, "v"),
    (LAMED + SHEVA + AYIN + QAMATS, "lʕā"),
    # Sin (the dot lands after the vowel in NFC, so sin needs cluster keys)
    (SHIN + SEGOL + SIN_DOT, "śe"),
]


def apply_table(surface: str) -> str:
    table = {nfc(k): v for k, v in TABLE}
    max_key = max(len(k) for k in table)
    s = nfc(surface)
    out, i = [], 0
    while i < len(s):
        for width in range(min(max_key, len(s) - i), 0, -1):
            if s[i : i + width] in table:
                out.append(table[s[i : i + width]])
                i += width
                break
        else:
            raise SystemExit(f"unmapped grapheme {s[i]!r} in {surface!r}")
    return "".join(out)


# One tuple per monad:
# (surface, lexeme, gloss, pos, stem, tense, person, gender, number, state, verb_class)
X = None
WORDS = [
    # Joshua 24:29 -- clause 1 (Way0 477)
    (VAV + PATAH, "w", "and", "conjunction", X, X, X, X, X, X, X),
    (YOD + SHEVA + HE + HIRIQ + YOD, "hyh", "he was", "verb", "qal", "wayyiqtol", 3, "m", "sg", X, "III-he"),
    (ALEF + PATAH + HET + HATAF_PATAH + RESH + TSERE + YOD, "ahr", "after", "preposition", X, X, X, X, X, X, X),
    (HE + PATAH, "ha", "the", "article", X, X, X, X, X, X, X),
    (DALET + SHEVA + DAGESH + BET + QAMATS + RESH + HIRIQ + YOD + MEM_F, "dbr", "word, thing", "noun", X, X, X, "m", "pl", "absolute", X),
    (HE + QAMATS, "ha", "the", "article", X, X, X, X, X, X, X),
    (ALEF + TSERE + LAMED + SEGOL + DAGESH + HE, "elh", "these", "pronoun", X, X, X, "common", "pl", X, X),
    # clause 2 (WayX 477)
    (VAV + PATAH, "w", "and", "conjunction", X, X, X, X, X, X, X),
    (YOD + QAMATS + DAGESH + MEM + QAMATS_QATAN + TAV, "mwt", "die", "verb", "qal", "wayyiqtol", 3, "m", "sg", X, "hollow"),
    (YOD + SHEVA + HE + VAV + HOLAM + SHIN + QUBUTS + SHIN_DOT + AYIN + PATAH, "yhwsh", "Joshua", "proper_noun", X, X, X, X, X, X, X),
    (BET + HIRIQ + DAGESH + NUN_F, "bn", "son", "noun", X, X, X, "m", "sg", "construct", X),
    (NUN + VAV + DAGESH + NUN_F, "nwn", "Nun", "proper_noun", X, X, X, X, X, X, X),
    (AYIN + SEGOL + BET + SEGOL + DALET, "ebd", "servant", "noun", X, X, X, "m", "sg", "construct", X),
    (YOD + SHEVA + HE + VAV + QAMATS + HE, "yhwh", "LORD", "proper_noun", X, X, X, X, X, X, X),
    (BET + SEGOL + DAGESH + NUN_F, "bn", "son", "noun", X, X, X, "m", "sg", "construct", X),
    (MEM + TSERE + ALEF + QAMATS + HE, "mah", "hundred", "numeral", X, X, X, "f", "sg", "absolute", X),
    (VAV + QAMATS, "w", "and", "conjunction", X, X, X, X, X, X, X),
    (AYIN + SEGOL + SHIN + SEGOL + SIN_DOT + RESH, "esr", "ten", "numeral", X, X, X, "m", "sg", "absolute", X),
    (SHIN + QAMATS + SHIN_DOT + NUN + HIRIQ + YOD + MEM_F, "shnh", "year", "noun", X, X, X, "f", "pl", "absolute", X),
    # Joshua 24:30 -- clause 3 (Way0 477)
    (VAV + PATAH, "w", "and", "conjunction", X, X, X, X, X, X, X),
    (YOD + HIRIQ + DAGESH + QOF + SHEVA + BET + SHEVA + DAGESH + RESH + VAV + DAGESH, "qbr", "bury", "verb", "qal", "wayyiqtol", 3, "m", "pl", X, "strong"),
    (ALEF + HOLAM + TAV + VAV + HOLAM, "et", "him", "particle", X, X, X, X, X, X, X),
    (BET + HIRIQ + DAGESH, "b", "in", "preposition", X, X, X, X, X, X, X),
    (GIMEL + SHEVA + BET + VAV + DAGESH + LAMED, "gbwl", "border", "noun", X, X, X, "m", "sg", "construct", X),
    (NUN + PATAH + HET + HATAF_PATAH + LAMED + QAMATS + TAV + VAV + HOLAM, "nhlh", "his inheritance", "noun", X, X, X, "f", "sg", "absolute", X),
    (BET + SHEVA + DAGESH, "b", "in", "preposition", X, X, X, X, X, X, X),
    (TAV + HIRIQ + MEM + SHEVA + NUN + PATAH + TAV, "tmnh", "Timnath", "proper_noun", X, X, X, X, X, X, X),
    (SAMEKH + SEGOL + RESH + PATAH + HET, "srh", "Serah", "proper_noun", X, X, X, X, X, X, X),
    # clause 4 (NmCl 10, relative)
    (ALEF + HATAF_PATAH + SHIN + SEGOL + SHIN_DOT + RESH, "ashr", "which", "conjunction", X, X, X, X, X, X, X),
    (BET + SHEVA + DAGESH, "b", "in", "preposition", X, X, X, X, X, X, X),
    (HE + PATAH + RESH, "hr", "mountain", "noun", X, X, X, "m", "sg", "construct", X),
    (ALEF + SEGOL + PE + SHEVA + RESH + QAMATS + YOD + HIRIQ + MEM_F, "efrym", "Ephraim", "proper_noun", X, X, X, X, X, X, X),
    (MEM + HIRIQ, "mn", "from", "preposition", X, X, X, X, X, X, X),
    (TSADI + SHEVA + DAGESH + PE + VAV + HOLAM + NUN_F, "tspwn", "north", "noun", X, X, X, "f", "sg", "construct", X),
    (LAMED + SHEVA, "l", "to", "preposition", X, X, X, X, X, X, X),
    (HE + PATAH + RESH, "hr", "mountain", "noun", X, X, X, "m", "sg", "construct", X),
    (GIMEL + QAMATS + DAGESH + AYIN + PATAH + SHIN + SHIN_DOT, "gash", "Gaash", "proper_noun", X, X, X, X, X, X, X),
    # Joshua 24:33 -- clause 5 (XQt 427)
    (VAV + SHEVA, "w", "and", "conjunction", X, X, X, X, X, X, X),
    (ALEF + SEGOL + LAMED + SHEVA + AYIN + QAMATS + ZAYIN + QAMATS + RESH, "elazr", "Eleazar", "proper_noun", X, X, X, X, X, X, X),
    (BET + SEGOL + DAGESH + NUN_F, "bn", "son", "noun", X, X, X, "m", "sg", "construct", X),
    (ALEF + PATAH + HE + HATAF_PATAH + RESH + HOLAM + NUN_F, "ahrn", "Aaron", "proper_noun", X, X, X, X, X, X, X),
    (MEM + TSERE + TAV, "mwt", "die", "verb", "qal", "qatal", 3, "m", "sg", X, "hollow"),
    # clause 6 (Way0 472)
    (VAV + PATAH, "w", "and", "conjunction", X, X, X, X, X, X, X),
    (YOD + HIRIQ + DAGESH + QOF + SHEVA + BET + SHEVA + DAGESH + RESH + VAV + DAGESH, "qbr", "bury", "verb", "qal", "wayyiqtol", 3, "m", "pl", X, "strong"),
    (ALEF + HOLAM + TAV + VAV + HOLAM, "et", "him", "particle", X, X, X, X, X, X, X),
    (BET + SHEVA + DAGESH, "b", "in", "preposition", X, X, X, X, X, X, X),
    (GIMEL + HIRIQ + BET + SHEVA + AYIN + PATAH + TAV, "gbah", "hill", "noun", X, X, X, "f", "sg", "construct", X),
    (PE + HIRIQ + DAGESH + YOD + NUN + SHEVA + HET + QAMATS + SAMEKH, "pynhs", "Phinehas", "proper_noun", X, X, X, X, X, X, X),
    (BET + SHEVA + DAGESH + NUN + VAV + HOLAM, "bn", "his son", "noun", X, X, X, "m", "sg", "absolute", X),
    # clause 7 (xQt0 12, relative)
    (ALEF + HATAF_PATAH + SHIN + SEGOL + SHIN_DOT + RESH, "ashr", "which", "conjunction", X, X, X, X, X, X, X),
    (NUN + HIRIQ + TAV + PATAH + DAGESH + NUN_F, "ntn", "give", "verb", "niphal", "qatal", 3, "m", "sg", X, "I-nun+III-nun"),
    (LAMED + VAV + HOLAM, "l", "to him", "preposition", X, X, X, X, X, X, X),
    (BET + SHEVA + DAGESH, "b", "in", "preposition", X, X, X, X, X, X, X),
    (HE + PATAH + RESH, "hr", "mountain", "noun", X, X, X, "m", "sg", "construct", X),
    (ALEF + SEGOL + PE + SHEVA + RESH + QAMATS + YOD + HIRIQ + MEM_F, "efrym", "Ephraim", "proper_noun", X, X, X, X, X, X, X),
]

# (monad range, verse) assignments
VERSES = [(range(1, 20), 29), (range(20, 38), 30), (range(38, 56), 33)]

# (id, clause, first, last, type, function)
PHRASES = [
    ("p1", "c1", 1, 1, "CjP", "Conj"), ("p2", "c1", 2, 2, "VP", "Pred"),
    ("p3", "c1", 3, 7, "PP", "Time"),
    ("p4", "c2", 8, 8, "CjP", "Conj"), ("p5", "c2", 9, 9, "VP", "Pred"),
    ("p6", "c2", 10, 14, "NP", "Subj"), ("p7", "c2", 15, 19, "NP", "Adju"),
    ("p8", "c3", 20, 20, "CjP", "Conj"), ("p9", "c3", 21, 21, "VP", "Pred"),
    ("p10", "c3", 22, 22, "PP", "Objc"), ("p11", "c3", 23, 25, "PP", "Cmpl"),
    ("p12", "c3", 26, 28, "PP", "Loca"),
    ("p13", "c4", 29, 29, "CjP", "Conj"), ("p14", "c4", 30, 32, "PP", "Cmpl"),
    ("p15", "c4", 33, 37, "PP", "Loca"),
    ("p16", "c5", 38, 38, "CjP", "Conj"), ("p17", "c5", 39, 41, "NP", "Subj"),
    ("p18", "c5", 42, 42, "VP", "Pred"),
    ("p19", "c6", 43, 43, "CjP", "Conj"), ("p20", "c6", 44, 44, "VP", "Pred"),
    ("p21", "c6", 45, 45, "PP", "Objc"), ("p22", "c6", 46, 49, "PP", "Cmpl"),
    ("p23", "c7", 50, 50, "CjP", "Conj"), ("p24", "c7", 51, 51, "VP", "Pred"),
    ("p25", "c7", 52, 52, "PP", "Cmpl"), ("p26", "c7", 53, 55, "PP", "Loca"),
]

# (id, sentence, first, last, label, ctc, tab_depth, mother)
CLAUSES = [
    ("c1", "s1", 1, 7, "Way0", "477", 0, "-"),
    ("c2", "s1", 8, 19, "WayX", "477", 0, "c1"),
    ("c3", "s2", 20, 28, "Way0", "477", 0, "c2"),
    ("c4", "s2", 29, 37, "NmCl", "10", 1, "c3"),
    ("c5", "s3", 38, 42, "XQt", "427", 0, "c3"),
    ("c6", "s4", 43, 49, "Way0", "472", 0, "c5"),
    ("c7", "s4", 50, 55, "xQt0", "12", 1, "c6"),
]

SENTENCES = [("s1", 1, 19), ("s2", 20, 37), ("s3", 38, 42), ("s4", 43, 55)]


def main() -> None:
    data_dir = Path(__file__).resolve().parents[1] / "src" / "corpus_tutor" / "data"
    data_dir.mkdir(parents=True, exist_ok=True)

    phrase_of = {}
    for pid, _, first, last, _, _ in PHRASES:
        for m in range(first, last + 1):
            phrase_of[m] = pid
    verse_of = {m: v for rng, v in VERSES for m in rng}

    lines = ["#corpus v1 books=Joshua"]
    for i, row in enumerate(WORDS, start=1):
        surface, lexeme, gloss, pos, stem, tense, person, gender, number, state, vc = row
        surface = nfc(surface)
        cells = [
            "W", str(i), "Joshua", "24", str(verse_of[i]), surface,
            apply_table(surface), lexeme, gloss, pos,
            stem or "-", tense or "-", str(person) if person else "-",
            gender or "-", number or "-", state or "-", vc or "-", phrase_of[i],
        ]
        lines.append("\t".join(cells))
    for pid, cid, first, last, ptype, func in PHRASES:
        lines.append("\t".join(["P", pid, cid, str(first), str(last), ptype, func]))
    for cid, sid, first, last, label, ctc, depth, mother in CLAUSES:
        lines.append("\t".join(["C", cid, sid, str(first), str(last), label, ctc, str(depth), mother]))
    for sid, first, last in SENTENCES:
        lines.append("\t".join(["S", sid, str(first), str(last)]))

    (data_dir / "joshua24.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    table_lines = ["# Transliteration table for the shipped Joshua 24 sample (longest match)"]
    for key, value in TABLE:
        table_lines.append(f"{nfc(key)}\t{value}")
    (data_dir / "translit.tsv").write_text("\n".join(table_lines) + "\n", encoding="utf-8")

    for i, row in enumerate(WORDS, start=1):
        print(f"{i:2d}  {apply_table(row[0])}")


if __name__ == "__main__":
    main()
