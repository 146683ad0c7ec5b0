"""Literal-paraphrase selection for marked metaphoric verbs.

For a target verb the candidate set is the union of WordNet synonyms and
direct hypernyms over all of its verb senses, expanded into all inflected
forms.  Each candidate fills the masked target position and the
highest-probability filler wins; the rewritten sentence substitutes the
winning lemma re-inflected to match the original surface form.

A sentence with several metaphoric verbs is handled one mask at a time:
each target is scored against the original sentence with the other
metaphors left in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .morph import (
    ExceptionTable,
    InflectionTag,
    expand_forms,
    lemmatize_verb,
    match_inflection,
)
from .scoring import CandidatePieces, ScoredCandidate, Scorer, rank
from .wordnet import KnowledgeBase, Origin, UnknownLemmaError
from .wordpiece import (
    UNK,
    SpanOutOfBoundsError,
    Vocab,
    basic_tokenize_with_offsets,
    build_masked_context,
    tokens_to_ids,
    wordpiece_word,
)

__all__ = [
    "TargetVerb",
    "Candidate",
    "CandidateSet",
    "ParaphraseResult",
    "ParaphraseFailure",
    "NoCandidatesError",
    "make_target",
    "build_candidate_set",
    "select_paraphrase",
    "paraphrase_all",
]

_TAG_ORDER = (
    InflectionTag.BASE,
    InflectionTag.THIRD_PERSON_SINGULAR,
    InflectionTag.PAST,
    InflectionTag.PAST_PARTICIPLE,
    InflectionTag.PRESENT_PARTICIPLE,
)


class NoCandidatesError(Exception):
    def __init__(self, lemma: str, dropped_unknown: int, dropped_multi_piece: int):
        detail = ""
        if dropped_unknown or dropped_multi_piece:
            detail = (
                f" ({dropped_unknown} unscoreable, {dropped_multi_piece} multi-piece"
                " candidates dropped)"
            )
        super().__init__(f"no usable candidates for {lemma!r}{detail}")
        self.lemma = lemma


@dataclass(frozen=True)
class TargetVerb:
    sentence: str
    token_index: int
    surface: str
    lemma: str


@dataclass(frozen=True)
class Candidate:
    lemma: str
    surface: str
    tag: InflectionTag
    origin: Origin


@dataclass
class CandidateSet:
    target: TargetVerb
    members: list[Candidate]
    dropped_unknown: int = 0
    dropped_multi_piece: int = 0


@dataclass
class ParaphraseResult:
    target: TargetVerb
    best: Candidate
    best_lemma: str
    ranking: list[ScoredCandidate]
    rewritten: str


@dataclass
class ParaphraseFailure:
    token_index: int
    error: str


def make_target(
    kb: KnowledgeBase, exc: ExceptionTable, sentence: str, token_index: int
) -> TargetVerb:
    """Resolve a token position into a TargetVerb with its WordNet lemma."""
    tokens = basic_tokenize_with_offsets(sentence)
    if not 0 <= token_index < len(tokens):
        raise SpanOutOfBoundsError((token_index, token_index + 1), len(tokens))
    surface = tokens[token_index][0]
    lemma = lemmatize_verb(surface.lower(), exc, kb.senses_by_lemma)
    return TargetVerb(sentence, token_index, surface, lemma)


def build_candidate_set(
    kb: KnowledgeBase,
    vocab: Vocab,
    target: TargetVerb,
    multi_piece: str = "allow",
) -> CandidateSet:
    """Assemble the inflected candidate set for a target verb.

    All inflections of the target lemma (and its exact surface) are
    excluded, duplicate surfaces keep the synonym origin, and candidates
    whose tokenization needs [UNK] are dropped and counted.  With
    ``multi_piece="exclude"``, candidates spanning more than one wordpiece
    are dropped as well.
    """
    lemma_candidates = kb.candidate_lemmas(target.lemma)  # may raise UnknownLemma
    excluded = {surface for surface, _ in expand_forms(target.lemma)}
    excluded.add(target.surface.lower())

    members: dict[str, Candidate] = {}
    dropped_unknown = 0
    dropped_multi = 0
    for cl in sorted(lemma_candidates, key=lambda c: c.lemma):
        forms = expand_forms(cl.lemma)
        for tag in _TAG_ORDER:
            for surface in sorted(s for s, t in forms if t is tag):
                if surface in excluded:
                    continue
                current = members.get(surface)
                if current is not None:
                    if current.origin is Origin.HYPERNYM and cl.origin is Origin.SYNONYM:
                        members[surface] = Candidate(cl.lemma, surface, tag, cl.origin)
                    continue
                pieces = wordpiece_word(vocab, surface)
                if UNK in pieces:
                    dropped_unknown += 1
                    excluded.add(surface)  # do not retry for another lemma
                    continue
                if multi_piece == "exclude" and len(pieces) > 1:
                    dropped_multi += 1
                    excluded.add(surface)
                    continue
                members[surface] = Candidate(cl.lemma, surface, tag, cl.origin)

    ordered = [members[surface] for surface in sorted(members)]
    if not ordered:
        raise NoCandidatesError(target.lemma, dropped_unknown, dropped_multi)
    return CandidateSet(target, ordered, dropped_unknown, dropped_multi)


def _restore_capitalization(replacement: str, target: TargetVerb, char_start: int) -> str:
    if char_start == 0 and target.surface[:1].isupper() and replacement:
        return replacement[0].upper() + replacement[1:]
    return replacement


def select_paraphrase(
    scorer: Scorer,
    kb: KnowledgeBase,
    vocab: Vocab,
    target: TargetVerb,
    multi_piece: str = "allow",
) -> ParaphraseResult:
    """Score the candidate set in context and return the best-fit paraphrase.

    Candidates are grouped by wordpiece count; each group is scored against
    a masked context with that many mask slots (one forward evaluation per
    group) and the length-normalized scores are merged into one ranking.
    """
    cset = build_candidate_set(kb, vocab, target, multi_piece)
    tokens_with_offsets = basic_tokenize_with_offsets(target.sentence)
    tokens = [t for t, _, _ in tokens_with_offsets]
    span = (target.token_index, target.token_index + 1)

    by_count: dict[int, list[CandidatePieces]] = {}
    for member in cset.members:
        piece_ids = tuple(tokens_to_ids(vocab, wordpiece_word(vocab, member.surface)))
        by_count.setdefault(len(piece_ids), []).append(
            CandidatePieces(member.surface, piece_ids)
        )

    scored: list[ScoredCandidate] = []
    for count in sorted(by_count):
        context = build_masked_context(vocab, tokens, span, count)
        scored.extend(scorer.score_batch(context, by_count[count]))

    ranking = rank(scored)
    by_surface = {m.surface: m for m in cset.members}
    best = by_surface[ranking[0].candidate]

    _, char_start, char_end = tokens_with_offsets[target.token_index]
    replacement = match_inflection(target.surface.lower(), target.lemma, best.lemma)
    replacement = _restore_capitalization(replacement, target, char_start)
    rewritten = target.sentence[:char_start] + replacement + target.sentence[char_end:]
    return ParaphraseResult(target, best, best.lemma, ranking, rewritten)


def paraphrase_all(
    scorer: Scorer,
    kb: KnowledgeBase,
    vocab: Vocab,
    exc: ExceptionTable,
    sentence: str,
    target_indices: Sequence[int],
    multi_piece: str = "allow",
) -> list[ParaphraseResult | ParaphraseFailure]:
    """Paraphrase each marked verb independently, one mask at a time.

    Every target is scored against the original sentence (other metaphors
    stay in place).  Per-target errors become ParaphraseFailure entries and
    do not abort the remaining targets.
    """
    results: list[ParaphraseResult | ParaphraseFailure] = []
    for index in target_indices:
        try:
            target = make_target(kb, exc, sentence, index)
            results.append(select_paraphrase(scorer, kb, vocab, target, multi_piece))
        except (SpanOutOfBoundsError, UnknownLemmaError, NoCandidatesError) as err:
            results.append(ParaphraseFailure(index, f"{type(err).__name__}: {err}"))
    return results
