#!/usr/bin/env python3
"""Build a MOH-style smoke slice from WordNet example sentences.

The MOH corpus itself is sourced from WordNet gloss examples, so a faithful
miniature test set can be reconstructed from the database files: for every
synset whose gloss quotes an example sentence containing an inflected form
of one of its member lemmas, emit a record in the canonical TSV schema
(id, sentence, verb, verb-index, synset-offset).

A fixed list of must-have sentences (the rewrite-demo ones) is emitted
first, followed by deterministic extras up to the requested count.

Usage: make_moh_slice.py <wordnet-dir> <output-tsv> [count]
"""

import re
import sys

sys.path.insert(0, "src")

from literalize.morph import bundled_exception_table, lemmatize_verb
from literalize.wordnet import load_wordnet
from literalize.wordpiece import basic_tokenize

MUST_HAVE = [
    "Am I supposed to swallow that story?",
    "She tugged for years to make a decent living",
    "She scanned the newspaper headlines while waiting for the taxi",
]


def example_records(kb, exc):
    for offset in sorted(kb.synsets_by_id):
        synset = kb.synsets_by_id[offset]
        for quoted in re.findall(r'"([^"]+)"', synset.gloss):
            tokens = basic_tokenize(quoted)
            if not 4 <= len(tokens) <= 16:
                continue
            for index, token in enumerate(tokens):
                lemma = lemmatize_verb(token.lower(), exc, kb.senses_by_lemma)
                if lemma in synset.lemmas:
                    yield quoted, lemma, index, offset
                    break
            else:
                continue
            break  # at most one record per synset


def main() -> None:
    wordnet_dir, output = sys.argv[1], sys.argv[2]
    count = int(sys.argv[3]) if len(sys.argv) > 3 else 12
    kb = load_wordnet(wordnet_dir)
    exc = bundled_exception_table()

    picked = []
    seen_sentences = set()
    pool = list(example_records(kb, exc))
    for want in MUST_HAVE:
        for sentence, lemma, index, offset in pool:
            if sentence == want:
                picked.append((sentence, lemma, index, offset))
                seen_sentences.add(sentence)
                break
        else:
            raise SystemExit(f"must-have sentence not found in glosses: {want!r}")
    for sentence, lemma, index, offset in pool:
        if len(picked) >= count:
            break
        if sentence not in seen_sentences and len(sentence.split()) >= 6:
            picked.append((sentence, lemma, index, offset))
            seen_sentences.add(sentence)

    with open(output, "w", encoding="utf-8") as out:
        out.write("id\tsentence\tverb\tverb-index\tsynset-offset\n")
        for n, (sentence, lemma, index, offset) in enumerate(picked, start=1):
            out.write(f"moh-{n:03d}\t{sentence}\t{lemma}\t{index}\t{offset}\n")
    print(f"wrote {len(picked)} records to {output}")


if __name__ == "__main__":
    main()
