#!/usr/bin/env python3
"""Build src/literalize/data/irregular_verbs.tsv from the en-inflectors list.

Input is the en-inflectors `verb/solve_lookup.js` module, which embeds a JS
array of [base, past, past_participle, third_person_singular,
present_participle] rows.  The upstream list contains some corrupt rows
(e.g. "tug, tuged, tuged, tugs, tuging"), so every inflected cell is
validated against the WordNet verb exception list or against regular
orthographic inflection; rows failing validation are dropped and those verbs
fall back to the regular rules at runtime.

Output columns (tab-separated): base, past, past_participle,
third_person_singular, present_participle.  Alternative forms within a cell
are pipe-separated ("was|were").

Usage: make_irregular_table.py <solve_lookup.js> <verb.exc> <output-tsv>
"""

import json
import re
import sys

# "be" is suppletive; the extra person/number forms ride along pipe-separated.
BE_ROW = ("be|am|are", "was|were", "been", "is", "being")

VOWELS = "aeiou"


def count_vowel_groups(word: str) -> int:
    return len(re.findall(r"[aeiouy]+", word))


def doubles_final_consonant(base: str) -> bool:
    if len(base) < 3 or count_vowel_groups(base) != 1:
        return False
    a, b, c = base[-3], base[-2], base[-1]
    return a not in VOWELS and b in VOWELS and c not in VOWELS + "wxy"


def regular_inflections(base: str, column: int) -> set[str]:
    """Regular surface(s) for row column 1..4 (past, pp, 3sg, ing)."""
    if column in (1, 2):  # past / past participle
        if base.endswith("e"):
            return {base + "d"}
        if base.endswith("y") and len(base) > 1 and base[-2] not in VOWELS:
            return {base[:-1] + "ied"}
        if doubles_final_consonant(base):
            return {base + base[-1] + "ed"}
        return {base + "ed"}
    if column == 3:  # third person singular
        if base.endswith(("s", "z", "x", "ch", "sh", "o")):
            return {base + "es"}
        if base.endswith("y") and len(base) > 1 and base[-2] not in VOWELS:
            return {base[:-1] + "ies"}
        return {base + "s"}
    # present participle
    if base.endswith("ie"):
        return {base[:-2] + "ying"}
    if base.endswith("e") and not base.endswith(("ee", "oe", "ye")):
        return {base[:-1] + "ing"}
    if doubles_final_consonant(base):
        return {base + base[-1] + "ing"}
    return {base + "ing"}


def load_rows(js_path: str) -> list[list[str]]:
    text = open(js_path, encoding="utf-8").read()
    match = re.search(r"exports\.irregular\s*=\s*(\[.*?\])\s*;", text, re.S)
    if not match:
        raise SystemExit("could not locate the irregular array in " + js_path)
    return json.loads(match.group(1))


def load_exc(path: str) -> dict[str, list[str]]:
    table: dict[str, list[str]] = {}
    for line in open(path, encoding="utf-8"):
        fields = line.split()
        if fields:
            table[fields[0]] = fields[1:]
    return table


def main() -> None:
    js_path, exc_path, dst = sys.argv[1], sys.argv[2], sys.argv[3]
    exc = load_exc(exc_path)
    rows: dict[str, tuple[str, ...]] = {}
    dropped = []
    for row in load_rows(js_path):
        base, past, pp, third, ing = (w.strip().lower() for w in row)
        if base == "be":
            continue
        bad = []
        for column, form in enumerate((past, pp, third, ing), start=1):
            in_exc = form in exc and base in exc[form]
            if form != base and not in_exc and form not in regular_inflections(base, column):
                bad.append(form)
        if bad:
            dropped.append(f"{base}({','.join(bad)})")
            continue
        rows.setdefault(base, (base, past, pp, third, ing))
    rows["be"] = BE_ROW

    # Seed additional rows from verb.exc itself: entries whose suffix shape
    # identifies the tag and whose form the regular rules cannot produce
    # (zigzagged -> zigzag, sped -> speed, ...).
    ed_form: dict[str, str] = {}
    ing_form: dict[str, str] = {}
    sg_form: dict[str, str] = {}
    for form in sorted(exc):
        lemmas = exc[form]
        if len(lemmas) != 1 or lemmas[0] in rows:
            continue
        base = lemmas[0]
        if form.endswith("ing") and form not in regular_inflections(base, 4):
            ing_form.setdefault(base, form)
        elif form.endswith("ed") and form not in regular_inflections(base, 1):
            ed_form.setdefault(base, form)
        elif form.endswith("s") and form not in regular_inflections(base, 3):
            sg_form.setdefault(base, form)
    seeded = 0
    for base in sorted(set(ed_form) | set(ing_form) | set(sg_form)):
        past = ed_form.get(base) or next(iter(regular_inflections(base, 1)))
        third = sg_form.get(base) or next(iter(regular_inflections(base, 3)))
        ing = ing_form.get(base) or next(iter(regular_inflections(base, 4)))
        rows[base] = (base, past, past, third, ing)
        seeded += 1
    print(f"seeded {seeded} rows from verb.exc")
    with open(dst, "w", encoding="utf-8") as out:
        out.write("# base\tpast\tpast_participle\tthird_person_singular\tpresent_participle\n")
        for base in sorted(rows):
            out.write("\t".join(rows[base]) + "\n")
    print(f"wrote {len(rows)} rows to {dst}")
    print(f"dropped {len(dropped)} unverifiable rows: {dropped}")


if __name__ == "__main__":
    main()
