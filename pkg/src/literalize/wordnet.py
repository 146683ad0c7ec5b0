"""WordNet verb database: parsing, synset lookup and candidate generation.

Reads the WordNet 3.x plain-text database files ``index.verb`` and
``data.verb``.  Only the verb part of speech is loaded; the "@" (hypernym)
pointer is resolved into the synset graph, all other pointer types are
parsed structurally and discarded.  Parsing is strict: a malformed line
aborts the load with the file name and line number rather than silently
degrading the candidate sets built on top of the graph.

data.verb line layout (fields are space separated, gloss after "|")::

    offset lex_filenum v w_cnt(hex) [word lex_id]... p_cnt [sym off pos st]... [frames] | gloss

index.verb line layout::

    lemma v synset_cnt p_cnt [sym]... sense_cnt tagsense_cnt offset...
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "WordNetError",
    "MissingFileError",
    "MalformedLineError",
    "DanglingHypernymError",
    "UnknownLemmaError",
    "Origin",
    "Synset",
    "CandidateLemma",
    "KnowledgeBase",
    "load_wordnet",
]

_OFFSET_RE = re.compile(r"^\d{8}$")


class WordNetError(Exception):
    """Base error for WordNet database handling."""


class MissingFileError(WordNetError):
    def __init__(self, path: Path):
        super().__init__(f"required WordNet file is missing: {path}")
        self.path = path


class MalformedLineError(WordNetError):
    def __init__(self, file: str, line_no: int, reason: str):
        super().__init__(f"{file}:{line_no}: {reason}")
        self.file = file
        self.line_no = line_no
        self.reason = reason


class DanglingHypernymError(WordNetError):
    def __init__(self, offset: str, referrer: str):
        super().__init__(
            f"synset {referrer} points to hypernym {offset} which is not in data.verb"
        )
        self.offset = offset
        self.referrer = referrer


class UnknownLemmaError(WordNetError):
    def __init__(self, lemma: str):
        super().__init__(f"no verb synsets for lemma {lemma!r}")
        self.lemma = lemma


class Origin(str, Enum):
    """How a candidate lemma is related to the target verb."""

    SYNONYM = "synonym"
    HYPERNYM = "hypernym"


@dataclass(frozen=True)
class Synset:
    """One verb sense: its member lemmas and direct hypernym links."""

    id: str
    lemmas: tuple[str, ...]
    hypernym_ids: tuple[str, ...]
    gloss: str


@dataclass(frozen=True)
class CandidateLemma:
    lemma: str
    origin: Origin
    source_synset: str


class KnowledgeBase:
    """Immutable verb-synset graph with a lemma index in sense order."""

    def __init__(
        self,
        synsets_by_id: Mapping[str, Synset],
        senses_by_lemma: Mapping[str, tuple[str, ...]],
        version: str,
    ):
        self.synsets_by_id = dict(synsets_by_id)
        self.senses_by_lemma = dict(senses_by_lemma)
        self.version = version

    def __len__(self) -> int:
        return len(self.synsets_by_id)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.senses_by_lemma

    def synset(self, offset: str) -> Synset:
        return self.synsets_by_id[offset]

    def synsets_of(self, lemma: str) -> list[Synset]:
        """Verb synsets of ``lemma`` in WordNet sense order; [] if unknown."""
        return [self.synsets_by_id[off] for off in self.senses_by_lemma.get(lemma, ())]

    def candidate_lemmas(self, target_lemma: str) -> set[CandidateLemma]:
        """Union of synset co-members and direct-hypernym members over all senses.

        The target lemma itself and multi-word lemmas are excluded.  A lemma
        reachable both ways is reported once, with the synonym origin
        preferred over hypernym.

        Raises UnknownLemmaError when the lemma has no verb synsets at all;
        a known lemma whose senses yield nothing usable returns the empty set.
        """
        senses = self.synsets_of(target_lemma)
        if not senses:
            raise UnknownLemmaError(target_lemma)
        chosen: dict[str, CandidateLemma] = {}

        def offer(lemma: str, origin: Origin, source: str) -> None:
            if lemma == target_lemma or "_" in lemma or " " in lemma:
                return
            current = chosen.get(lemma)
            if current is None or (
                current.origin is Origin.HYPERNYM and origin is Origin.SYNONYM
            ):
                chosen[lemma] = CandidateLemma(lemma, origin, source)

        for synset in senses:
            for member in synset.lemmas:
                offer(member, Origin.SYNONYM, synset.id)
        for synset in senses:
            for hyp_id in synset.hypernym_ids:
                for member in self.synsets_by_id[hyp_id].lemmas:
                    offer(member, Origin.HYPERNYM, hyp_id)
        return set(chosen.values())


def _data_lines(path: Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if line.startswith(" ") or not line.strip():
                continue  # license header / blank
            yield line_no, line.rstrip("\n")


def _parse_data_verb(path: Path) -> dict[str, Synset]:
    synsets: dict[str, Synset] = {}
    for line_no, line in _data_lines(path):
        body, _, gloss = line.partition("|")
        fields = body.split()

        def fail(reason: str) -> MalformedLineError:
            return MalformedLineError(path.name, line_no, reason)

        if len(fields) < 6:
            raise fail("truncated synset record")
        offset, _lex_filenum, ss_type, w_cnt_hex = fields[:4]
        if not _OFFSET_RE.match(offset):
            raise fail(f"bad synset offset {offset!r}")
        if ss_type != "v":
            raise fail(f"unexpected part of speech {ss_type!r} in data.verb")
        try:
            w_cnt = int(w_cnt_hex, 16)
        except ValueError:
            raise fail(f"bad word count {w_cnt_hex!r}") from None
        if w_cnt < 1:
            raise fail("synset has no words")
        if len(fields) < 4 + 2 * w_cnt + 1:
            raise fail("word list shorter than declared count")
        words = [fields[4 + 2 * i].lower() for i in range(w_cnt)]
        lemmas = tuple(dict.fromkeys(words))  # dedupe, keep order

        p_idx = 4 + 2 * w_cnt
        try:
            p_cnt = int(fields[p_idx], 10)
        except ValueError:
            raise fail(f"bad pointer count {fields[p_idx]!r}") from None
        if len(fields) < p_idx + 1 + 4 * p_cnt:
            raise fail("pointer list shorter than declared count")
        hypernyms: list[str] = []
        for i in range(p_cnt):
            symbol = fields[p_idx + 1 + 4 * i]
            target = fields[p_idx + 2 + 4 * i]
            pos = fields[p_idx + 3 + 4 * i]
            if not _OFFSET_RE.match(target):
                raise fail(f"bad pointer target {target!r}")
            if symbol == "@" and pos == "v":
                hypernyms.append(target)

        if offset in synsets:
            raise fail(f"duplicate synset offset {offset}")
        synsets[offset] = Synset(offset, lemmas, tuple(hypernyms), gloss.strip())
    return synsets


def _parse_index_verb(path: Path, synsets: Mapping[str, Synset]) -> dict[str, tuple[str, ...]]:
    senses: dict[str, tuple[str, ...]] = {}
    for line_no, line in _data_lines(path):
        fields = line.split()

        def fail(reason: str) -> MalformedLineError:
            return MalformedLineError(path.name, line_no, reason)

        if len(fields) < 7:
            raise fail("truncated index record")
        lemma, pos = fields[0].lower(), fields[1]
        if pos != "v":
            raise fail(f"unexpected part of speech {pos!r} in index.verb")
        try:
            synset_cnt = int(fields[2], 10)
            p_cnt = int(fields[3], 10)
        except ValueError:
            raise fail("bad counts") from None
        offsets = fields[4 + p_cnt + 2 :]
        if len(offsets) != synset_cnt:
            raise fail(
                f"declared {synset_cnt} senses but found {len(offsets)} offsets"
            )
        for off in offsets:
            if not _OFFSET_RE.match(off):
                raise fail(f"bad synset offset {off!r}")
            if off not in synsets:
                raise fail(f"index references unknown synset {off}")
        if lemma in senses:
            raise fail(f"duplicate index entry for {lemma!r}")
        senses[lemma] = tuple(offsets)
    return senses


def load_wordnet(directory: str | Path) -> KnowledgeBase:
    """Load and link index.verb + data.verb from a WordNet database directory."""
    directory = Path(directory)
    data_path = directory / "data.verb"
    index_path = directory / "index.verb"
    for path in (data_path, index_path):
        if not path.is_file():
            raise MissingFileError(path)

    synsets = _parse_data_verb(data_path)
    for synset in synsets.values():
        for hyp_id in synset.hypernym_ids:
            if hyp_id not in synsets:
                raise DanglingHypernymError(hyp_id, synset.id)
    senses = _parse_index_verb(index_path, synsets)
    version = "sha256:" + hashlib.sha256(data_path.read_bytes()).hexdigest()[:12]
    return KnowledgeBase(synsets, senses, version)
