#!/usr/bin/env python3
"""One-time conversion of the public MOH release to the canonical TSV.

The harness consumes a fixed schema (id, sentence, verb, verb-index,
synset-offset); the public corpus ships as a CSV whose columns vary by
release.  This script locates the verb token in each sentence by
inflection matching and resolves the gold synset offset:

  * a column holding an 8-digit offset is used directly;
  * otherwise the sentence is matched against the quoted example sentences
    in the verb's WordNet glosses (the corpus was sourced from them).

Rows marked non-metaphorical (when a class column exists) and rows that
cannot be resolved are skipped with a reason.

Usage: convert_moh.py <public-csv> <wordnet-dir> <output-tsv>
"""

import csv
import re
import sys

sys.path.insert(0, "src")

from literalize.morph import bundled_exception_table, expand_forms, lemmatize_verb
from literalize.wordnet import load_wordnet
from literalize.wordpiece import basic_tokenize

TERM_COLUMNS = ("term", "verb", "word")
SENTENCE_COLUMNS = ("sentence", "example", "context")
CLASS_COLUMNS = ("class", "label", "annotation")
OFFSET_RE = re.compile(r"^\d{8}$")


def pick(row: dict, names: tuple[str, ...]) -> str | None:
    for name in names:
        for key in row:
            if key and key.strip().lower() == name:
                return row[key].strip()
    return None


def normalize(text: str) -> str:
    return " ".join(basic_tokenize(text)).lower()


def main() -> None:
    src, wordnet_dir, dst = sys.argv[1], sys.argv[2], sys.argv[3]
    kb = load_wordnet(wordnet_dir)
    exc = bundled_exception_table()

    written = 0
    skipped: list[str] = []
    with open(src, encoding="utf-8", newline="") as handle, open(
        dst, "w", encoding="utf-8"
    ) as out:
        out.write("id\tsentence\tverb\tverb-index\tsynset-offset\n")
        for n, row in enumerate(csv.DictReader(handle), start=1):
            term = pick(row, TERM_COLUMNS)
            sentence = pick(row, SENTENCE_COLUMNS)
            label = pick(row, CLASS_COLUMNS)
            if not term or not sentence:
                skipped.append(f"row {n}: missing term or sentence")
                continue
            if label and "metaphor" not in label.lower():
                skipped.append(f"row {n}: class {label!r}")
                continue
            lemma = lemmatize_verb(term.lower(), exc, kb.senses_by_lemma)
            if lemma not in kb.senses_by_lemma:
                skipped.append(f"row {n}: {term!r} is not a WordNet verb")
                continue
            surfaces = {s for s, _ in expand_forms(lemma)}
            tokens = basic_tokenize(sentence)
            index = next(
                (i for i, t in enumerate(tokens) if t.lower() in surfaces), None
            )
            if index is None:
                skipped.append(f"row {n}: no token of {lemma!r} in sentence")
                continue

            offset = None
            explicit = pick(row, ("synset", "offset", "synset-offset"))
            if explicit and OFFSET_RE.match(explicit):
                offset = explicit
            else:
                wanted = normalize(sentence)
                for synset in kb.synsets_of(lemma):
                    for quoted in re.findall(r'"([^"]+)"', synset.gloss):
                        if normalize(quoted) == wanted:
                            offset = synset.id
                            break
                    if offset:
                        break
            if offset is None or offset not in kb.synsets_by_id:
                skipped.append(f"row {n}: gold synset unresolved")
                continue
            written += 1
            out.write(f"moh-{written:03d}\t{sentence}\t{lemma}\t{index}\t{offset}\n")

    print(f"wrote {written} records to {dst}; skipped {len(skipped)}")
    for reason in skipped[:20]:
        print("  -", reason)


if __name__ == "__main__":
    main()
