#!/usr/bin/env python3
"""Regenerate src/literalize/data/verb.exc from the javascript-lemmatizer dump.

The upstream dump (dict/verb.exc.json) is a JSON list of [inflected, lemma]
pairs extracted from the WordNet verb exception list.  This script merges
duplicate keys back into the one-line-per-form format used by WordNet
(`form lemma [lemma ...]`) and sorts the output.

Usage: make_verb_exc.py <verb.exc.json> <output-file>
"""

import json
import sys
from collections import OrderedDict


def main() -> None:
    src, dst = sys.argv[1], sys.argv[2]
    pairs = json.load(open(src))
    merged: "OrderedDict[str, list[str]]" = OrderedDict()
    for form, lemma in pairs:
        form, lemma = form.strip().lower(), lemma.strip().lower()
        merged.setdefault(form, [])
        if lemma not in merged[form]:
            merged[form].append(lemma)
    with open(dst, "w", encoding="utf-8") as out:
        for form in sorted(merged):
            out.write(form + " " + " ".join(merged[form]) + "\n")
    print(f"wrote {len(merged)} entries to {dst}")


if __name__ == "__main__":
    main()
