import math

import pytest

from literalize.morph import InflectionTag, expand_forms
from literalize.paraphrase import (
    NoCandidatesError,
    ParaphraseFailure,
    ParaphraseResult,
    build_candidate_set,
    make_target,
    paraphrase_all,
    select_paraphrase,
)
from literalize.scoring import ScoredCandidate, Scorer, ScorerBackend, BackendKind
from literalize.wordnet import Origin, UnknownLemmaError
from literalize.wordpiece import Vocab, basic_tokenize

SWALLOW_SENTENCE = "Am I supposed to swallow that story?"
TUG_SENTENCE = "She tugged for years to make a decent living."


class SpyScorer(Scorer):
    """Deterministic scorer that records every context it was handed."""

    def __init__(self, preferred: dict[str, float] | None = None):
        super().__init__(ScorerBackend(kind=BackendKind.UNIGRAM_FREQUENCY))
        self.contexts = []
        self.preferred = preferred or {}

    def _score(self, context, candidates):
        self.contexts.append(context)
        return [
            ScoredCandidate(c.candidate, self.preferred.get(c.candidate, -100.0))
            for c in candidates
        ]


class TestMakeTarget:
    def test_resolves_surface_and_lemma(self, kb, exc):
        target = make_target(kb, exc, TUG_SENTENCE, 1)
        assert target.surface == "tugged"
        assert target.lemma == "tug"

    def test_out_of_bounds(self, kb, exc):
        from literalize.wordpiece import SpanOutOfBoundsError

        with pytest.raises(SpanOutOfBoundsError):
            make_target(kb, exc, "short sentence", 10)


class TestBuildCandidateSet:
    def test_swallow_candidates_include_believe_family(self, kb, vocab, exc):
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        cset = build_candidate_set(kb, vocab, target)
        surfaces = {m.surface for m in cset.members}
        for expected in ("believe", "believes", "believed", "believing", "accept"):
            assert expected in surfaces

    def test_no_member_matches_target_inflections(self, kb, vocab, exc):
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        cset = build_candidate_set(kb, vocab, target)
        banned = {s for s, _ in expand_forms("swallow")} | {"swallow"}
        assert not banned & {m.surface for m in cset.members}

    def test_members_unique_by_surface(self, kb, vocab, exc):
        target = make_target(kb, exc, TUG_SENTENCE, 1)
        cset = build_candidate_set(kb, vocab, target)
        surfaces = [m.surface for m in cset.members]
        assert len(surfaces) == len(set(surfaces))

    def test_synonym_origin_preferred_on_collision(self, kb, vocab, exc):
        # "accept" reaches swallow's set both as co-member and via hypernyms
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        cset = build_candidate_set(kb, vocab, target)
        by_surface = {m.surface: m for m in cset.members}
        assert by_surface["accept"].origin is Origin.SYNONYM

    def test_unknown_lemma_propagates(self, kb, vocab, exc):
        target = make_target(kb, exc, "He zzzzed loudly", 1)
        with pytest.raises(UnknownLemmaError):
            build_candidate_set(kb, vocab, target)

    def test_empty_candidate_set_raises_no_candidates(self, kb, vocab, exc):
        # abolish has only a multi-word co-member and no hypernyms
        target = make_target(kb, exc, "They abolish the rule", 1)
        with pytest.raises(NoCandidatesError):
            build_candidate_set(kb, vocab, target)

    def test_unscoreable_candidates_dropped_and_counted(self, kb, exc):
        # tiny vocab without char fallbacks: most candidates are unscoreable
        tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "believe", "accept"]
        tiny = Vocab({t: i for i, t in enumerate(tokens)}, tuple(tokens))
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        cset = build_candidate_set(kb, tiny, target)
        assert {m.surface for m in cset.members} == {"believe", "accept"}
        assert cset.dropped_unknown > 0

    def test_multi_piece_exclusion_mode(self, kb, vocab, exc):
        # "dart" candidates include "zip", whose inflections are held out of
        # the test vocabulary and therefore tokenize to several pieces
        target = make_target(kb, exc, "Shadows darted across the wall", 1)
        allow = build_candidate_set(kb, vocab, target, multi_piece="allow")
        exclude = build_candidate_set(kb, vocab, target, multi_piece="exclude")
        assert exclude.dropped_multi_piece > 0
        assert len(exclude.members) < len(allow.members)
        from literalize.wordpiece import wordpiece_word

        assert all(len(wordpiece_word(vocab, m.surface)) == 1 for m in exclude.members)


class TestSelectParaphrase:
    def test_swallow_story_with_rigged_scorer(self, kb, vocab, exc):
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        scorer = SpyScorer({"believe": -1.0})
        result = select_paraphrase(scorer, kb, vocab, target)
        assert result.best_lemma == "believe"
        assert result.rewritten == "Am I supposed to believe that story?"

    def test_tugged_rewrite_matches_tense(self, kb, vocab, exc):
        target = make_target(kb, exc, TUG_SENTENCE, 1)
        scorer = SpyScorer({"struggled": -1.0})
        result = select_paraphrase(scorer, kb, vocab, target)
        assert result.best_lemma == "struggle"
        assert result.rewritten == "She struggled for years to make a decent living."

    def test_rewrite_reinflects_even_when_base_form_wins(self, kb, vocab, exc):
        # the argmax may pick the base form; the rewrite still matches tense
        target = make_target(kb, exc, TUG_SENTENCE, 1)
        scorer = SpyScorer({"struggle": -1.0})
        result = select_paraphrase(scorer, kb, vocab, target)
        assert result.best.surface == "struggle"
        assert result.rewritten == "She struggled for years to make a decent living."

    def test_sentence_initial_capitalization_restored(self, kb, vocab, exc):
        target = make_target(kb, exc, "Swallowed the story whole.", 0)
        scorer = SpyScorer({"believed": -1.0})
        result = select_paraphrase(scorer, kb, vocab, target)
        assert result.rewritten == "Believed the story whole."

    def test_frequency_backend_matches_bruteforce(self, kb, vocab, exc, freq_scorer):
        counts = {"believe": 50, "accept": 49, "stand": 7}
        scorer = freq_scorer(counts)
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        result = select_paraphrase(scorer, kb, vocab, target)
        # oracle: enumerate candidates x forms, max count, lexicographic tie
        cset = build_candidate_set(kb, vocab, target)
        expected = max(
            (m.surface for m in cset.members),
            key=lambda s: (counts.get(s, 0), [-ord(c) for c in s]),
        )
        assert result.best.surface == expected == "believe"

    def test_argmax_invariant_under_frequency_scaling(self, kb, vocab, exc, freq_scorer):
        counts = {"believe": 50, "accept": 49, "stand": 7, "struggled": 31}
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        baseline = select_paraphrase(freq_scorer(counts), kb, vocab, target)
        for scale in (7, 1000):
            scaled = freq_scorer({k: v * scale for k, v in counts.items()})
            result = select_paraphrase(scaled, kb, vocab, target)
            assert result.best == baseline.best

    def test_lexicographic_tie_break(self, kb, vocab, exc, freq_scorer):
        scorer = freq_scorer({})  # all candidates tie at the smoothing floor
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        result = select_paraphrase(scorer, kb, vocab, target)
        cset = build_candidate_set(kb, vocab, target)
        assert result.best.surface == min(m.surface for m in cset.members)

    def test_best_heads_the_ranking(self, kb, vocab, exc, toy_scorer):
        target = make_target(kb, exc, SWALLOW_SENTENCE, 4)
        result = select_paraphrase(toy_scorer, kb, vocab, target)
        assert result.ranking[0].candidate == result.best.surface
        assert result.best_lemma == result.best.lemma

    def test_rewritten_preserves_token_count(self, kb, vocab, exc, toy_scorer):
        for sentence, index in ((SWALLOW_SENTENCE, 4), (TUG_SENTENCE, 1)):
            target = make_target(kb, exc, sentence, index)
            result = select_paraphrase(toy_scorer, kb, vocab, target)
            assert len(basic_tokenize(result.rewritten)) == len(basic_tokenize(sentence))
            # differs only at the target token
            before = basic_tokenize(sentence)
            after = basic_tokenize(result.rewritten)
            diffs = [i for i, (a, b) in enumerate(zip(before, after)) if a != b]
            assert diffs == [index] or diffs == []

    def test_multi_piece_candidates_grouped_by_mask_len(self, kb, vocab, exc):
        target = make_target(kb, exc, "Shadows darted across the wall", 1)
        scorer = SpyScorer()
        select_paraphrase(scorer, kb, vocab, target)
        mask_lens = sorted({ctx.mask_len for ctx in scorer.contexts})
        assert len(scorer.contexts) == len(mask_lens)  # one forward per group
        assert mask_lens[0] == 1 and mask_lens[-1] > 1


class TestParaphraseAll:
    def test_each_target_sees_the_other_metaphor_unmasked(self, kb, vocab, exc):
        sentence = "She tugged for years and swallowed the story"
        tokens = basic_tokenize(sentence)
        tug_index, swallow_index = tokens.index("tugged"), tokens.index("swallowed")
        scorer = SpyScorer({"believe": -1.0, "struggle": -1.5})
        results = paraphrase_all(
            scorer, kb, vocab, exc, sentence, [tug_index, swallow_index]
        )
        assert all(isinstance(r, ParaphraseResult) for r in results)
        tugged_id = vocab.token_to_id["tugged"]
        swallowed_id = vocab.token_to_id["swallowed"]
        tug_contexts = scorer.contexts[: len(scorer.contexts) // 2]
        swallow_contexts = scorer.contexts[len(scorer.contexts) // 2 :]
        assert all(swallowed_id in ctx.ids for ctx in tug_contexts)
        assert all(tugged_id in ctx.ids for ctx in swallow_contexts)

    def test_empty_target_list(self, kb, vocab, exc, toy_scorer):
        assert paraphrase_all(toy_scorer, kb, vocab, exc, SWALLOW_SENTENCE, []) == []

    def test_error_isolation(self, kb, vocab, exc):
        scorer = SpyScorer({"believe": -1.0})
        results = paraphrase_all(
            scorer, kb, vocab, exc, SWALLOW_SENTENCE, [4, 99]
        )
        assert isinstance(results[0], ParaphraseResult)
        assert isinstance(results[1], ParaphraseFailure)
        assert "SpanOutOfBounds" in results[1].error

    def test_singleton_consistency(self, kb, vocab, exc, freq_scorer):
        scorer = freq_scorer({"believe": 10, "accept": 5})
        single = select_paraphrase(
            scorer, kb, vocab, make_target(kb, exc, SWALLOW_SENTENCE, 4)
        )
        (batched,) = paraphrase_all(scorer, kb, vocab, exc, SWALLOW_SENTENCE, [4])
        assert batched.best == single.best
        assert batched.rewritten == single.rewritten
        assert batched.ranking == single.ranking
