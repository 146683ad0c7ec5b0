#!/usr/bin/env python3
"""Freeze reference WordPiece tokenizations for the parity test.

Runs the reference BERT tokenizer (transformers' slow BertTokenizer, cased
configuration) over 50 sentences with the project test vocabulary and
freezes tokens + ids.  The package tokenizer must reproduce the frozen
output byte-exactly.  transformers is a generation-time dependency only.

Usage: make_wordpiece_fixture.py <vocab.txt> <moh-slice-tsv> <output-json>
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

from transformers import BertTokenizer

EDGE_SENTENCES = [
    "Am I supposed to swallow that story?",
    "She tugged for years to make a decent living.",
    "Hello, world!",
    "A sentence with   extra   spaces between words",
    "Tabs\tand\nnewlines collapse",
    "Numbers like 12345 and 3.14 split apart",
    "Hyphenated low-budget re-examination cases",
    "Quotes \"double\" and 'single' and `backticks`",
    "Unicode dashes – and — and ellipsis…",
    "Accented café naïve résumé words",
    "parentheses (inside) [brackets] {braces}",
    "trailing punctuation!!!",
    "?leading punctuation",
    "semi;colons:and,commas.everywhere",
    "don't can't won't contractions",
    "ALLCAPS SHOUTING WORDS",
    "MiXeD cAsE wEiRdNeSs",
    "a",
    "z",
    "I",
    "the quick brown fox jumps over the lazy dog",
    "The Quick Brown Fox Jumps Over The Lazy Dog",
    "qqqqzzzzqqqqzzzzqqqqzzzzqqqqzzzzqqqqzzzz",
    "supercalifragilisticexpialidocious",
    "antidisestablishmentarianism crumbles slowly",
    "x yz zz xx",
    "zeroed zigzagged zoomed",
    "He zeroes in on the target",
    "w@rd$ with $ymbol$ in$ide",
    "email-like user@example.com tokens",
    "slash/separated/path/components",
    "percent 50% and dollar $100 signs",
    "中文 characters get isolated",
    "mixed 中 English 文 text",
    "  leading and trailing whitespace  ",
    "one",
    "two words",
    "amplified signals raced through wires",
    "The committee abolished the old rule",
    "Critics attacked the author relentlessly",
    "Prices inflated beyond all reason",
    "Their hopes withered in the drought",
    "The glass shattered into fragments",
    "He steered the conversation away",
    "The river flooded the village",
    "She mended the torn jacket",
    "Ideas bloomed in every meeting",
    "The evidence drowned his objections",
    "They boiled with quiet anger",
    "Time erased every trace of the city",
]


def main() -> None:
    vocab_path, slice_path, output = sys.argv[1], sys.argv[2], sys.argv[3]
    sentences = list(EDGE_SENTENCES)
    with open(slice_path, encoding="utf-8") as handle:
        next(handle)
        for line in handle:
            sentence = line.split("\t")[1]
            if sentence not in sentences:
                sentences.append(sentence)
    sentences = sentences[:50]
    assert len(sentences) == 50, len(sentences)

    # transformers 5.x ignores vocab_file in the constructor; stage a
    # tokenizer directory and load the cased configuration from it.
    with tempfile.TemporaryDirectory() as tmp:
        shutil.copy(vocab_path, Path(tmp) / "vocab.txt")
        (Path(tmp) / "tokenizer_config.json").write_text(
            json.dumps({"do_lower_case": False, "tokenizer_class": "BertTokenizer"})
        )
        reference = BertTokenizer.from_pretrained(tmp)
    cases = []
    for sentence in sentences:
        tokens = reference.tokenize(sentence)
        ids = reference.convert_tokens_to_ids(tokens)
        cases.append({"text": sentence, "tokens": tokens, "ids": ids})
    with open(output, "w", encoding="utf-8") as out:
        json.dump({"vocab": "tests/data/vocab/vocab.txt", "cases": cases}, out, indent=1)
        out.write("\n")
    print(f"froze {len(cases)} reference tokenizations -> {output}")


if __name__ == "__main__":
    main()
