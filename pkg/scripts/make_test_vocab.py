#!/usr/bin/env python3
"""Build the WordPiece test vocabulary (vocab.txt) used by the test suite.

Layout mirrors the published BERT files: [PAD] at 0, [unused0-98],
then [UNK]/[CLS]/[SEP]/[MASK] from id 100, single characters and their
"##" continuations, common suffix pieces, function words (with sentence
case variants), every single-word WordNet verb lemma, and the inflected
forms of all lemmas except those starting with 'x' or 'z' (held out so the
multi-wordpiece scoring path stays exercised).

Usage: make_test_vocab.py <wordnet-dir> <moh-slice-tsv> <output-vocab>
"""

import string
import sys

sys.path.insert(0, "src")

from literalize.morph import expand_forms
from literalize.wordnet import load_wordnet
from literalize.wordpiece import basic_tokenize

FUNCTION_WORDS = """
a an the and or but if then than that this these those it its he him his she
her they them their we us our you your i me my is are was were be been being
am do does did done to of in on at by for with from into over under about
as not no nor so too very can could will would shall should may might must
have has had having there here when where while who whom whose what which why
how all any both each few more most other some such only own same s t don now
""".split()

SUFFIX_PIECES = [
    "##s", "##es", "##ed", "##d", "##ing", "##ly", "##er", "##ers", "##ion",
    "##ions", "##ged", "##ging", "##ned", "##ning", "##ted", "##ting",
    "##ped", "##ping", "##bed", "##bing", "##med", "##ming", "##red",
    "##ring", "##led", "##ling", "##ies", "##ied", "##ve", "##n",
]


def main() -> None:
    wordnet_dir, slice_path, output = sys.argv[1], sys.argv[2], sys.argv[3]
    kb = load_wordnet(wordnet_dir)

    tokens: list[str] = ["[PAD]"]
    tokens += [f"[unused{i}]" for i in range(99)]
    tokens += ["[UNK]", "[CLS]", "[SEP]", "[MASK]"]

    chars = list(string.ascii_lowercase + string.ascii_uppercase + string.digits)
    chars += list("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")
    tokens += chars
    continuations = ["##" + c for c in string.ascii_lowercase + string.ascii_uppercase + string.digits]
    tokens += continuations + [p for p in SUFFIX_PIECES if p not in continuations]

    words: set[str] = set(FUNCTION_WORDS)
    words.update(w.capitalize() for w in FUNCTION_WORDS)

    # sentences of the bundled MOH slice must tokenize cleanly
    with open(slice_path, encoding="utf-8") as handle:
        next(handle)
        for line in handle:
            sentence = line.split("\t")[1]
            words.update(basic_tokenize(sentence))

    lemmas = [l for l in kb.senses_by_lemma if "_" not in l]
    words.update(lemmas)
    for lemma in lemmas:
        if lemma[0] in "xz":
            continue  # held out: their inflections exercise multi-piece scoring
        words.update(surface for surface, _ in expand_forms(lemma))

    seen = set(tokens)
    for word in sorted(words):
        if word and word not in seen:
            tokens.append(word)
            seen.add(word)

    with open(output, "w", encoding="utf-8") as out:
        out.write("\n".join(tokens) + "\n")
    print(f"wrote {len(tokens)} tokens to {output}")


if __name__ == "__main__":
    main()
