#!/usr/bin/env python3
"""Select a fixture of regular verbs whose inflections round-trip.

Scans the WordNet verb index alphabetically, skipping irregular-table
entries, multi-word lemmas and non-ASCII ones, and keeps verbs for which
lemmatize(inflect(lemma, tag)) == lemma for every tag.  Verbs failing the
round trip (orthographic oddities like "singe") are reported and skipped.

Usage: make_regular_verbs.py <wordnet-dir> <output-file> [count]
"""

import string
import sys

sys.path.insert(0, "src")

from literalize.morph import (
    InflectionTag,
    _irregular_table,
    bundled_exception_table,
    expand_forms,
    inflect,
    lemmatize_verb,
)
from literalize.wordnet import load_wordnet


def main() -> None:
    wordnet_dir, output = sys.argv[1], sys.argv[2]
    count = int(sys.argv[3]) if len(sys.argv) > 3 else 500
    kb = load_wordnet(wordnet_dir)
    exc = bundled_exception_table()
    irregular = set(_irregular_table())
    lexicon = kb.senses_by_lemma

    kept: list[str] = []
    failures: list[tuple[str, str, str]] = []
    for lemma in sorted(lexicon):
        if len(kept) >= count:
            break
        if lemma in irregular or "_" in lemma:
            continue
        if not all(c in string.ascii_lowercase for c in lemma):
            continue
        ok = True
        for tag in InflectionTag:
            surface = inflect(lemma, tag)
            back = lemmatize_verb(surface, exc, lexicon)
            if back != lemma:
                failures.append((lemma, surface, back))
                ok = False
                break
        if ok:
            kept.append(lemma)

    with open(output, "w", encoding="utf-8") as out:
        out.write("\n".join(kept) + "\n")
    print(f"kept {len(kept)} regular verbs -> {output}")
    print(f"skipped {len(failures)}; first failures: {failures[:15]}")


if __name__ == "__main__":
    main()
