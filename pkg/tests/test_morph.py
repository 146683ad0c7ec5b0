from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from literalize.morph import (
    InflectionTag,
    bundled_exception_table,
    expand_forms,
    inflect,
    lemmatize_verb,
    load_exception_table,
    match_inflection,
)

DATA = Path(__file__).parent / "data"

BASE = InflectionTag.BASE
TPS = InflectionTag.THIRD_PERSON_SINGULAR
PAST = InflectionTag.PAST
PP = InflectionTag.PAST_PARTICIPLE
ING = InflectionTag.PRESENT_PARTICIPLE


class TestInflect:
    @pytest.mark.parametrize(
        "lemma,tag,expected",
        [
            ("struggle", PAST, "struggled"),
            ("walk", ING, "walking"),
            ("swim", PAST, "swam"),
            ("believe", TPS, "believes"),
            ("carry", PAST, "carried"),
            ("carry", TPS, "carries"),
            ("tug", PAST, "tugged"),
            ("tug", ING, "tugging"),
            ("quit", ING, "quitting"),
            ("go", PAST, "went"),
            ("go", PP, "gone"),
            ("die", ING, "dying"),
            ("see", ING, "seeing"),
            ("fix", TPS, "fixes"),
            ("echo", TPS, "echoes"),
            ("visit", PAST, "visited"),
            ("be", PAST, "was"),
            ("be", BASE, "be"),
            ("", PAST, ""),
        ],
    )
    def test_inflections(self, lemma, tag, expected):
        assert inflect(lemma, tag) == expected

    def test_deterministic(self):
        for lemma in ("struggle", "swim", "be", "tug"):
            for tag in InflectionTag:
                assert inflect(lemma, tag) == inflect(lemma, tag)

    @given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=12))
    @settings(max_examples=200, deadline=None)
    def test_total_on_ascii_lowercase(self, lemma):
        for tag in InflectionTag:
            surface = inflect(lemma, tag)
            assert isinstance(surface, str) and surface


class TestExpandForms:
    def test_believe_collapses_past_and_participle(self):
        forms = expand_forms("believe")
        surfaces = {s for s, _ in forms}
        assert surfaces == {"believe", "believes", "believed", "believing"}
        assert ("believed", PAST) in forms and ("believed", PP) in forms

    def test_be_includes_person_number_forms(self):
        surfaces = {s for s, _ in expand_forms("be")}
        for form in ("was", "were", "been", "being", "is", "are", "am", "be"):
            assert form in surfaces

    def test_empty_input(self):
        assert expand_forms("") == set()


class TestLemmatize:
    def test_examples(self, kb, exc):
        lexicon = kb.senses_by_lemma
        assert lemmatize_verb("tugged", exc, lexicon) == "tug"
        assert lemmatize_verb("went", exc, lexicon) == "go"
        assert lemmatize_verb("believe", exc, lexicon) == "believe"

    def test_exception_hit_wins_over_identity(self, kb, exc):
        # "found" is itself a lemma, but the exception list maps it to "find"
        assert lemmatize_verb("found", exc, kb.senses_by_lemma) == "find"
        assert lemmatize_verb("left", exc, kb.senses_by_lemma) == "leave"

    def test_detachment_with_validation(self, kb, exc):
        lexicon = kb.senses_by_lemma
        assert lemmatize_verb("runs", exc, lexicon) == "run"
        assert lemmatize_verb("carries", exc, lexicon) == "carry"
        assert lemmatize_verb("hoping", exc, lexicon) == "hope"
        assert lemmatize_verb("zigzagging", exc, lexicon) == "zigzag"

    def test_unvalidatable_surface_returned_unchanged(self, kb, exc):
        assert lemmatize_verb("qqqqq", exc, kb.senses_by_lemma) == "qqqqq"

    def test_exception_table_totality(self, kb, exc):
        # every verb.exc entry lemmatizes to one of its listed lemmas
        lexicon = kb.senses_by_lemma
        violations = [
            key
            for key, lemmas in exc.entries.items()
            if lemmatize_verb(key, exc, lexicon) not in lemmas
        ]
        assert violations == []

    def test_load_exception_table_lowercases(self, tmp_path):
        path = tmp_path / "verb.exc"
        path.write_text("WENT Go\nax axe ax\n", encoding="utf-8")
        table = load_exception_table(path)
        assert table.get("went") == ("go",)
        assert table.get("ax") == ("axe", "ax")


class TestRoundTrip:
    def test_regular_fixture_round_trips(self, kb, exc):
        verbs = (DATA / "fixtures" / "regular_verbs.txt").read_text().split()
        assert len(verbs) == 500
        lexicon = kb.senses_by_lemma
        failures = []
        for lemma in verbs:
            for tag in InflectionTag:
                surface = inflect(lemma, tag)
                if lemmatize_verb(surface, exc, lexicon) != lemma:
                    failures.append((lemma, tag.value, surface))
        assert failures == []


class TestMatchInflection:
    @pytest.mark.parametrize(
        "surface,lemma,new,expected",
        [
            ("tugged", "tug", "struggle", "struggled"),
            ("swallow", "swallow", "believe", "believe"),
            ("runs", "run", "sprint", "sprints"),
            ("tugging", "tug", "struggle", "struggling"),
            ("went", "go", "walk", "walked"),
            ("unknownform", "tug", "struggle", "struggle"),
        ],
    )
    def test_examples(self, surface, lemma, new, expected):
        assert match_inflection(surface, lemma, new) == expected

    def test_identity_preserves_surface(self):
        for lemma in ("tug", "be", "carry", "go"):
            for surface, _ in expand_forms(lemma):
                assert match_inflection(surface, lemma, lemma) == surface

    def test_ambiguous_tags_fall_back_to_base(self):
        # "cost" is base/past/participle at once; "take" disagrees across
        # those tags, so the base form is the deterministic fallback
        assert inflect("cost", PAST) == "cost"
        assert match_inflection("cost", "cost", "take") == "take"
