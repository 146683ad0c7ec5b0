#!/usr/bin/env python3
"""Extract a small self-contained verb lexicon in WordNet database format.

Takes the first N suitable verbs (single-word, with at least one usable
candidate) from the real database, collects the closure of their synsets
plus direct hypernym synsets, and rewrites valid index.verb/data.verb files
restricted to that closure.  Hypernym pointers leaving the closure are
dropped; a fixed frames blob keeps the verb-record grammar intact.

Also emits a vocabulary covering every inflected candidate surface (so
nothing is unscoreable) and a deterministic token<TAB>count frequency table.

Usage: make_toy_lexicon.py <wordnet-dir> <output-dir> [n-verbs]
"""

import random
import string
import sys
from pathlib import Path

sys.path.insert(0, "src")

from literalize.morph import expand_forms
from literalize.wordnet import load_wordnet

FUNCTION_WORDS = (
    "a an the and that this it he she they we you i is are was were to of in "
    "on at by for with not story years same old new"
).split()


def main() -> None:
    wordnet_dir, out_dir = sys.argv[1], Path(sys.argv[2])
    n_verbs = int(sys.argv[3]) if len(sys.argv) > 3 else 100
    out_dir.mkdir(parents=True, exist_ok=True)
    kb = load_wordnet(wordnet_dir)

    verbs: list[str] = []
    for lemma in sorted(kb.senses_by_lemma):
        if "_" in lemma or not all(c in string.ascii_lowercase for c in lemma):
            continue
        try:
            candidates = kb.candidate_lemmas(lemma)
        except Exception:
            continue
        if candidates:
            verbs.append(lemma)
        if len(verbs) >= n_verbs:
            break

    keep: set[str] = set()
    for verb in verbs:
        for synset in kb.synsets_of(verb):
            keep.add(synset.id)
            keep.update(synset.hypernym_ids)

    with open(out_dir / "data.verb", "w", encoding="utf-8") as data_out:
        data_out.write("  1 toy verb lexicon extracted for tests  \n")
        for offset in sorted(keep):
            synset = kb.synset(offset)
            words = " ".join(f"{w} 0" for w in synset.lemmas)
            hyps = [h for h in synset.hypernym_ids if h in keep]
            ptrs = "".join(f" @ {h} v 0000" for h in hyps)
            gloss = synset.gloss or "toy gloss"
            data_out.write(
                f"{offset} 00 v {len(synset.lemmas):02x} {words} "
                f"{len(hyps):03d}{ptrs} 01 + 02 00 | {gloss}  \n"
            )

    lemma_rows = []
    for lemma in sorted({w for off in keep for w in kb.synset(off).lemmas}):
        offsets = [off for off in kb.senses_by_lemma.get(lemma, ()) if off in keep]
        if offsets:
            lemma_rows.append((lemma, offsets))
    with open(out_dir / "index.verb", "w", encoding="utf-8") as index_out:
        index_out.write("  1 toy verb index extracted for tests  \n")
        for lemma, offsets in lemma_rows:
            index_out.write(
                f"{lemma} v {len(offsets)} 1 @ {len(offsets)} 0 "
                + " ".join(offsets) + "  \n"
            )

    surfaces: set[str] = set(FUNCTION_WORDS)
    for lemma, _ in lemma_rows:
        if "_" not in lemma:
            surfaces.update(s for s, _ in expand_forms(lemma))
    tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + sorted(surfaces)
    (out_dir / "vocab.txt").write_text("\n".join(tokens) + "\n", encoding="utf-8")

    rng = random.Random(20200901)
    with open(out_dir / "frequencies.tsv", "w", encoding="utf-8") as freq_out:
        for surface in sorted(surfaces):
            freq_out.write(f"{surface}\t{rng.randint(1, 5000)}\n")

    print(
        f"toy lexicon: {len(verbs)} probe verbs, {len(keep)} synsets,"
        f" {len(lemma_rows)} lemmas, {len(tokens)} vocab tokens -> {out_dir}"
    )
    (out_dir / "probe_verbs.txt").write_text("\n".join(verbs) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
