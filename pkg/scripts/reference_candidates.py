#!/usr/bin/env python3
"""Freeze reference candidate enumerations for parser-fidelity tests.

Independent of the package code on purpose: a from-scratch walk of the
WordNet database files that enumerates, for each probe verb, the synonym
and direct-hypernym lemmas over all of its senses (target excluded,
multi-word lemmas excluded, synonym origin preferred on collision).  The
frozen output is the oracle the package parser is tested against.

Usage: reference_candidates.py <wordnet-dir> <output-json> [verb ...]
"""

import json
import sys

DEFAULT_VERBS = [
    "swallow", "tug", "scan", "devour", "grasp", "attack", "abolish",
    "brighten", "bloom", "boil", "drown", "erase", "flood", "inflate",
    "mend", "ripen", "shatter", "steer", "twist", "wither",
]


def parse_files(wordnet_dir: str):
    synsets = {}
    for raw in open(f"{wordnet_dir}/data.verb", encoding="utf-8"):
        if raw[:1].isspace():
            continue
        body = raw.split("|")[0].split()
        offset = body[0]
        n_words = int(body[3], 16)
        words = [body[4 + 2 * i].lower() for i in range(n_words)]
        ptr_base = 4 + 2 * n_words
        n_ptrs = int(body[ptr_base])
        hypernyms = [
            body[ptr_base + 2 + 4 * i]
            for i in range(n_ptrs)
            if body[ptr_base + 1 + 4 * i] == "@" and body[ptr_base + 3 + 4 * i] == "v"
        ]
        synsets[offset] = (words, hypernyms)
    index = {}
    for raw in open(f"{wordnet_dir}/index.verb", encoding="utf-8"):
        if raw[:1].isspace():
            continue
        fields = raw.split()
        n_ptrs = int(fields[3])
        index[fields[0]] = fields[4 + n_ptrs + 2 :]
    return synsets, index


def enumerate_candidates(synsets, index, verb: str) -> dict[str, str]:
    synonym_lemmas: set[str] = set()
    hypernym_lemmas: set[str] = set()
    for offset in index.get(verb, []):
        words, hypernyms = synsets[offset]
        synonym_lemmas.update(words)
        for hyp in hypernyms:
            hypernym_lemmas.update(synsets[hyp][0])
    out = {}
    for lemma in sorted(synonym_lemmas | hypernym_lemmas):
        if lemma == verb or "_" in lemma:
            continue
        out[lemma] = "synonym" if lemma in synonym_lemmas else "hypernym"
    return out


def main() -> None:
    wordnet_dir, output = sys.argv[1], sys.argv[2]
    verbs = sys.argv[3:] or DEFAULT_VERBS
    synsets, index = parse_files(wordnet_dir)
    frozen = {verb: enumerate_candidates(synsets, index, verb) for verb in verbs}
    with open(output, "w", encoding="utf-8") as handle:
        json.dump(frozen, handle, indent=1, sort_keys=True)
        handle.write("\n")
    sizes = {verb: len(candidates) for verb, candidates in frozen.items()}
    print(f"froze {len(frozen)} verbs -> {output}: {sizes}")


if __name__ == "__main__":
    main()
