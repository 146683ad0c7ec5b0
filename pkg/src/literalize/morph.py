"""English verb morphology: inflection, lemmatization and tense matching.

Irregular verbs come from a bundled table (base, past, past participle,
third person singular, present participle; alternatives pipe-separated).
Regular verbs are inflected by orthographic rule: e-drop, y->ies, and
final-consonant doubling for single-syllable stems.  Lemmatization follows
the WordNet morphy scheme: exception list first, then suffix-detachment
rules validated against a lexicon of known lemmas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Container, Iterable, Mapping

__all__ = [
    "InflectionTag",
    "ExceptionTable",
    "load_exception_table",
    "bundled_exception_table",
    "inflect",
    "expand_forms",
    "lemmatize_verb",
    "match_inflection",
]

VOWELS = "aeiou"


class InflectionTag(Enum):
    BASE = "base"
    THIRD_PERSON_SINGULAR = "third_person_singular"
    PAST = "past"
    PAST_PARTICIPLE = "past_participle"
    PRESENT_PARTICIPLE = "present_participle"


# Recovery priority when one surface maps to several tags.
_TAG_ORDER = (
    InflectionTag.BASE,
    InflectionTag.THIRD_PERSON_SINGULAR,
    InflectionTag.PAST,
    InflectionTag.PAST_PARTICIPLE,
    InflectionTag.PRESENT_PARTICIPLE,
)


@dataclass(frozen=True)
class ExceptionTable:
    """Inflected form -> candidate lemmas, from a verb.exc-format file."""

    entries: Mapping[str, tuple[str, ...]]

    def __contains__(self, surface: str) -> bool:
        return surface in self.entries

    def get(self, surface: str) -> tuple[str, ...]:
        return self.entries.get(surface, ())


def _parse_exceptions(lines: Iterable[str]) -> ExceptionTable:
    entries: dict[str, tuple[str, ...]] = {}
    for line in lines:
        fields = line.lower().split()
        if len(fields) >= 2:
            entries[fields[0]] = tuple(fields[1:])
    return ExceptionTable(entries)


def load_exception_table(path: str | Path) -> ExceptionTable:
    with open(path, encoding="utf-8") as handle:
        return _parse_exceptions(handle)


@lru_cache(maxsize=1)
def bundled_exception_table() -> ExceptionTable:
    text = (resources.files("literalize") / "data/verb.exc").read_text("utf-8")
    return _parse_exceptions(text.splitlines())


@lru_cache(maxsize=1)
def _irregular_table() -> dict[str, dict[InflectionTag, tuple[str, ...]]]:
    table: dict[str, dict[InflectionTag, tuple[str, ...]]] = {}
    data = (resources.files("literalize") / "data/irregular_verbs.tsv").read_text("utf-8")
    for line in data.splitlines():
        if not line or line.startswith("#"):
            continue
        cells = [tuple(cell.split("|")) for cell in line.split("\t")]
        base = cells[0][0]
        table[base] = {
            InflectionTag.BASE: cells[0],
            InflectionTag.PAST: cells[1],
            InflectionTag.PAST_PARTICIPLE: cells[2],
            InflectionTag.THIRD_PERSON_SINGULAR: cells[3],
            InflectionTag.PRESENT_PARTICIPLE: cells[4],
        }
    return table


def _vowel_groups(word: str) -> int:
    return len(re.findall(r"[aeiouy]+", word))


def _doubles_final_consonant(word: str) -> bool:
    if len(word) < 3 or _vowel_groups(word) != 1:
        return False
    a, b, c = word[-3], word[-2], word[-1]
    if a == "u" and len(word) >= 4 and word[-4] == "q":
        a = "q"  # "qu" acts as a consonant cluster (quit -> quitting)
    return a not in VOWELS and b in VOWELS and c not in VOWELS + "wxy"


def _regular_inflect(lemma: str, tag: InflectionTag) -> str:
    if tag is InflectionTag.THIRD_PERSON_SINGULAR:
        if lemma.endswith(("s", "z", "x", "ch", "sh", "o")):
            return lemma + "es"
        if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in VOWELS:
            return lemma[:-1] + "ies"
        return lemma + "s"
    if tag in (InflectionTag.PAST, InflectionTag.PAST_PARTICIPLE):
        if lemma.endswith("e"):
            return lemma + "d"
        if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in VOWELS:
            return lemma[:-1] + "ied"
        if _doubles_final_consonant(lemma):
            return lemma + lemma[-1] + "ed"
        return lemma + "ed"
    if tag is InflectionTag.PRESENT_PARTICIPLE:
        if lemma.endswith("ie"):
            return lemma[:-2] + "ying"
        if lemma.endswith("e") and not lemma.endswith(("ee", "oe", "ye")):
            return lemma[:-1] + "ing"
        if _doubles_final_consonant(lemma):
            return lemma + lemma[-1] + "ing"
        return lemma + "ing"
    return lemma


def inflect(lemma: str, tag: InflectionTag) -> str:
    """Deterministic surface form of ``lemma`` under ``tag``.

    Total on any string: irregular-table lookup first, orthographic rules
    otherwise.  The base tag always returns the lemma unchanged.
    """
    if not lemma or tag is InflectionTag.BASE:
        return lemma
    row = _irregular_table().get(lemma)
    if row is not None:
        return row[tag][0]
    return _regular_inflect(lemma, tag)


def expand_forms(lemma: str) -> set[tuple[str, InflectionTag]]:
    """All (surface, tag) pairs for a lemma, including irregular alternatives."""
    if not lemma:
        return set()
    forms: set[tuple[str, InflectionTag]] = set()
    row = _irregular_table().get(lemma)
    for tag in _TAG_ORDER:
        if row is not None:
            for surface in row[tag]:
                forms.add((surface, tag))
        else:
            forms.add((_regular_inflect(lemma, tag) if tag is not InflectionTag.BASE else lemma, tag))
    return forms


# WordNet morphy detachment rules for verbs, applied in order.
_DETACHMENTS = (
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
)


def _detach_once(form: str) -> list[str]:
    out = [form[: -len(old)] + new for old, new in _DETACHMENTS if form.endswith(old)]
    for suffix in ("ed", "ing"):  # undo consonant doubling: tugged -> tug
        if form.endswith(suffix):
            stem = form[: -len(suffix)]
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in VOWELS:
                out.append(stem[:-1])
    return out


def lemmatize_verb(surface: str, exc: ExceptionTable, lexicon: Container[str]) -> str:
    """Map an inflected verb surface to its lemma.

    An exception-table hit always wins (so "found" maps to "find" even
    though "found" is itself a lemma); otherwise morphy detachment rules
    are applied, keeping the first candidate found in ``lexicon``
    (normally the knowledge base's lemma set).  Returns ``surface``
    unchanged when nothing validates.
    """
    listed = exc.get(surface)
    if listed:
        for candidate in listed:
            if candidate in lexicon:
                return candidate
        return listed[0]
    candidates = [surface] + _detach_once(surface)
    seen = set()
    while candidates:
        for candidate in candidates:
            if candidate in lexicon:
                return candidate
        seen.update(candidates)
        candidates = [
            c for form in candidates for c in _detach_once(form) if c not in seen
        ]
    return surface


def match_inflection(original_surface: str, original_lemma: str, new_lemma: str) -> str:
    """Inflect ``new_lemma`` to match the form of ``original_surface``.

    The tag is recovered by locating the surface among the original lemma's
    forms.  When the recovered tags disagree on the new lemma's surface
    (irrecoverable tense), the base form is returned.
    """
    forms = expand_forms(original_lemma)
    tags = [tag for tag in _TAG_ORDER if (original_surface, tag) in forms]
    if not tags:
        return inflect(new_lemma, InflectionTag.BASE)
    if new_lemma == original_lemma:
        return original_surface
    surfaces = {inflect(new_lemma, tag) for tag in tags}
    if len(surfaces) == 1:
        return surfaces.pop()
    return inflect(new_lemma, InflectionTag.BASE)
