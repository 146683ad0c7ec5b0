"""Evaluation-corpus loading, automatic sense-class scoring and exports.

MOH-style records arrive as a TSV with gold WordNet synset offsets and are
scored automatically: a prediction is correct when its lemma belongs to the
gold synset's lemma set (optionally extended with the direct hypernym
synsets' lemmas).  VUA-style records carry no gold synset and only flow to
the questionnaire and MT-batch exports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .morph import ExceptionTable, lemmatize_verb
from .paraphrase import (
    NoCandidatesError,
    ParaphraseFailure,
    ParaphraseResult,
    make_target,
    select_paraphrase,
)
from .scoring import Scorer
from .wordnet import KnowledgeBase, UnknownLemmaError
from .wordpiece import SpanOutOfBoundsError, Vocab, basic_tokenize_with_offsets

__all__ = [
    "EvalRecord",
    "DroppedRecord",
    "RecordVerdict",
    "EvalReport",
    "LoadResult",
    "MissingFileError",
    "HeaderMismatchError",
    "load_moh",
    "load_vua",
    "paraphrase_records",
    "judge_results",
    "auto_evaluate",
    "SimpleResult",
    "save_results",
    "load_results",
    "export_human_eval",
    "export_mt_batch",
    "cohens_kappa",
    "write_report",
]

MOH_HEADER = ("id", "sentence", "verb", "verb-index", "synset-offset")


class MissingFileError(Exception):
    pass


class HeaderMismatchError(Exception):
    def __init__(self, expected: Sequence[str], found: Sequence[str]):
        super().__init__(f"expected header {list(expected)}, found {list(found)}")


@dataclass(frozen=True)
class EvalRecord:
    id: str
    sentence: str
    target_index: int
    target_surface: str
    gold_lemma: str
    gold_synset: str | None = None
    genre: str | None = None


@dataclass(frozen=True)
class DroppedRecord:
    id: str
    reason: str


@dataclass(frozen=True)
class RecordVerdict:
    id: str
    predicted_lemma: str
    correct: bool


@dataclass
class LoadResult:
    records: list[EvalRecord]
    dropped: list[DroppedRecord]


@dataclass
class EvalReport:
    total: int
    correct: int
    accuracy: float
    mode: str
    per_record: list[RecordVerdict]
    dropped: list[DroppedRecord]

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "mode": self.mode,
            "per_record": [
                {"id": v.id, "predicted_lemma": v.predicted_lemma, "correct": v.correct}
                for v in self.per_record
            ],
            "dropped": [{"id": d.id, "reason": d.reason} for d in self.dropped],
        }


def _surface_at(sentence: str, index: int) -> str | None:
    tokens = basic_tokenize_with_offsets(sentence)
    if 0 <= index < len(tokens):
        return tokens[index][0]
    return None


def load_moh(path: str | Path, kb: KnowledgeBase) -> LoadResult:
    """Load the canonical MOH-style TSV; invalid rows are reported, not fatal."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"dataset not found: {path}")
    records: list[EvalRecord] = []
    dropped: list[DroppedRecord] = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n").split("\t")
        if tuple(header) != MOH_HEADER:
            raise HeaderMismatchError(MOH_HEADER, header)
        for line_no, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            row_id = fields[0] if fields else f"line{line_no}"
            if len(fields) != len(MOH_HEADER):
                dropped.append(DroppedRecord(row_id, f"expected 5 fields, got {len(fields)}"))
                continue
            _, sentence, gold_lemma, index_text, offset = fields
            try:
                target_index = int(index_text)
            except ValueError:
                dropped.append(DroppedRecord(row_id, f"bad verb-index {index_text!r}"))
                continue
            surface = _surface_at(sentence, target_index)
            if surface is None:
                dropped.append(DroppedRecord(row_id, f"verb-index {target_index} out of range"))
                continue
            synset = kb.synsets_by_id.get(offset)
            if synset is None:
                dropped.append(DroppedRecord(row_id, f"unknown synset offset {offset}"))
                continue
            if gold_lemma not in synset.lemmas:
                dropped.append(
                    DroppedRecord(row_id, f"gold lemma {gold_lemma!r} not in synset {offset}")
                )
                continue
            records.append(
                EvalRecord(row_id, sentence, target_index, surface, gold_lemma, offset)
            )
    return LoadResult(records, dropped)


def load_vua(path: str | Path) -> LoadResult:
    """Load VUA-style JSON lines: {id, sentence, target_index, target_surface, genre}."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"dataset not found: {path}")
    records: list[EvalRecord] = []
    dropped: list[DroppedRecord] = []
    for line_no, line in enumerate(open(path, encoding="utf-8"), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as err:
            dropped.append(DroppedRecord(f"line{line_no}", f"bad JSON: {err}"))
            continue
        row_id = str(row.get("id", f"line{line_no}"))
        sentence = row.get("sentence", "")
        try:
            target_index = int(row["target_index"])
        except (KeyError, TypeError, ValueError):
            dropped.append(DroppedRecord(row_id, "missing or bad target_index"))
            continue
        surface = _surface_at(sentence, target_index)
        if surface is None or surface != row.get("target_surface"):
            dropped.append(DroppedRecord(row_id, "target_surface does not match sentence token"))
            continue
        records.append(
            EvalRecord(
                row_id,
                sentence,
                target_index,
                surface,
                row.get("gold_lemma", ""),
                None,
                row.get("genre"),
            )
        )
    return LoadResult(records, dropped)


def _sense_class_lemmas(kb: KnowledgeBase, offset: str, mode: str) -> set[str]:
    synset = kb.synset(offset)
    lemmas = set(synset.lemmas)
    if mode == "synset+hypernyms":
        for hyp_id in synset.hypernym_ids:
            lemmas.update(kb.synset(hyp_id).lemmas)
    return lemmas


def paraphrase_records(
    records: Sequence[EvalRecord],
    kb: KnowledgeBase,
    scorer: Scorer,
    vocab: Vocab,
    exc: ExceptionTable,
    multi_piece: str = "allow",
) -> list[ParaphraseResult | ParaphraseFailure]:
    """Run the paraphraser over each record; failures stay aligned in place."""
    results: list[ParaphraseResult | ParaphraseFailure] = []
    for record in records:
        try:
            target = make_target(kb, exc, record.sentence, record.target_index)
            if target.surface != record.target_surface:
                results.append(
                    ParaphraseFailure(record.target_index, "target surface mismatch")
                )
                continue
            results.append(select_paraphrase(scorer, kb, vocab, target, multi_piece))
        except (UnknownLemmaError, NoCandidatesError, SpanOutOfBoundsError) as err:
            results.append(
                ParaphraseFailure(record.target_index, f"{type(err).__name__}: {err}")
            )
    return results


def judge_results(
    records: Sequence[EvalRecord],
    results: Sequence[ParaphraseResult | ParaphraseFailure],
    kb: KnowledgeBase,
    exc: ExceptionTable,
    sense_class: str = "synset",
) -> EvalReport:
    """Turn aligned paraphrase results into an accuracy report."""
    if sense_class not in ("synset", "synset+hypernyms"):
        raise ValueError(f"unknown sense_class mode {sense_class!r}")
    if len(results) != len(records):
        raise ValueError("results do not align with records")
    per_record: list[RecordVerdict] = []
    dropped: list[DroppedRecord] = []
    correct = 0
    for record, result in zip(records, results):
        if record.gold_synset is None:
            raise ValueError(f"record {record.id} has no gold synset; cannot auto-evaluate")
        if isinstance(result, ParaphraseFailure):
            dropped.append(DroppedRecord(record.id, result.error))
            continue
        predicted = lemmatize_verb(result.best.surface, exc, kb.senses_by_lemma)
        verdict = predicted in _sense_class_lemmas(kb, record.gold_synset, sense_class)
        per_record.append(RecordVerdict(record.id, predicted, verdict))
        if verdict:
            correct += 1
    total = len(per_record)
    accuracy = correct / total if total else 0.0
    return EvalReport(total, correct, accuracy, sense_class, per_record, dropped)


def auto_evaluate(
    records: Sequence[EvalRecord],
    kb: KnowledgeBase,
    scorer: Scorer,
    vocab: Vocab,
    exc: ExceptionTable,
    sense_class: str = "synset",
    multi_piece: str = "allow",
) -> EvalReport:
    """Score each record's paraphrase against its gold WordNet sense class.

    A prediction is correct when its lemmatized form belongs to the gold
    synset's lemma set (mode "synset"), or to that set extended with the
    direct hypernym synsets' lemmas (mode "synset+hypernyms").
    """
    results = paraphrase_records(records, kb, scorer, vocab, exc, multi_piece)
    return judge_results(records, results, kb, exc, sense_class)


def _target_span(record: EvalRecord) -> tuple[int, int]:
    tokens = basic_tokenize_with_offsets(record.sentence)
    _, start, end = tokens[record.target_index]
    return start, end


@dataclass(frozen=True)
class SimpleResult:
    """Minimal stand-in for a ParaphraseResult loaded back from disk."""

    best_lemma: str
    rewritten: str


def _is_failure(result: object) -> bool:
    return result is None or isinstance(result, ParaphraseFailure)


def save_results(
    records: Sequence[EvalRecord],
    results: Sequence[ParaphraseResult | ParaphraseFailure | None],
    path: str | Path,
) -> None:
    """Persist aligned paraphrase results as JSON lines keyed by record id."""
    if len(results) != len(records):
        raise ValueError("results do not align with records")
    with open(path, "w", encoding="utf-8") as out:
        for record, result in zip(records, results):
            if _is_failure(result):
                error = result.error if isinstance(result, ParaphraseFailure) else "missing"
                row: dict[str, object] = {"id": record.id, "error": error}
            else:
                row = {
                    "id": record.id,
                    "best_lemma": result.best_lemma,
                    "best_surface": result.best.surface,
                    "rewritten": result.rewritten,
                }
            out.write(json.dumps(row) + "\n")


def load_results(
    records: Sequence[EvalRecord], path: str | Path
) -> list[SimpleResult | None]:
    """Load saved results and align them with ``records`` by id."""
    by_id: dict[str, SimpleResult | None] = {}
    for line in open(path, encoding="utf-8"):
        line = line.strip()
        if not line:
            continue
        row = json.loads(line)
        if "error" in row:
            by_id[str(row["id"])] = None
        else:
            by_id[str(row["id"])] = SimpleResult(row["best_lemma"], row["rewritten"])
    return [by_id.get(record.id) for record in records]


def export_human_eval(
    records: Sequence[EvalRecord],
    results_by_model: Mapping[str, Sequence[object]],
    path: str | Path,
) -> None:
    """Write questionnaire JSON lines: one header object, one line per record.

    Each question carries the sentence, the target's character span for
    underlining, and one lemmatized paraphrase field per model.
    """
    models = sorted(results_by_model)
    for model in models:
        if len(results_by_model[model]) != len(records):
            raise ValueError(f"model {model!r}: results do not align with records")
    with open(path, "w", encoding="utf-8") as out:
        header = {"kind": "human-eval-questionnaire", "models": models, "questions": len(records)}
        out.write(json.dumps(header) + "\n")
        for i, record in enumerate(records):
            start, end = _target_span(record)
            paraphrases = {}
            for model in models:
                result = results_by_model[model][i]
                paraphrases[model] = None if _is_failure(result) else result.best_lemma
            line = {
                "id": record.id,
                "sentence": record.sentence,
                "target": {"surface": record.target_surface, "start": start, "end": end},
                "paraphrases": paraphrases,
                "verdict": "",
            }
            out.write(json.dumps(line) + "\n")


def export_mt_batch(
    records: Sequence[EvalRecord],
    results: Sequence[object],
    path: str | Path,
) -> None:
    """Write MT pre-editing JSON lines: {id, original_sentence, paraphrased_sentence}.

    Records whose paraphrase failed keep the original sentence and are
    flagged, so the batch stays aligned for downstream translation.
    """
    if len(results) != len(records):
        raise ValueError("results do not align with records")
    with open(path, "w", encoding="utf-8") as out:
        for record, result in zip(records, results):
            line: dict[str, object] = {"id": record.id, "original_sentence": record.sentence}
            if _is_failure(result):
                line["paraphrased_sentence"] = record.sentence
                line["paraphrase_failed"] = True
            else:
                line["paraphrased_sentence"] = result.rewritten
            out.write(json.dumps(line) + "\n")


def cohens_kappa(first: Sequence[object], second: Sequence[object]) -> float:
    """Cohen's kappa for two annotators over the same items."""
    if len(first) != len(second):
        raise ValueError("annotator sequences differ in length")
    if not first:
        raise ValueError("kappa needs at least one item")
    n = len(first)
    observed = sum(1 for a, b in zip(first, second) if a == b) / n
    categories = set(first) | set(second)
    expected = sum(
        (sum(1 for a in first if a == c) / n) * (sum(1 for b in second if b == c) / n)
        for c in categories
    )
    if expected == 1.0:
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def write_report(report: EvalReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as out:
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
