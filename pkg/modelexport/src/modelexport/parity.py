"""Numerical parity between the exported graph and the reference model.

Runs each probe sentence through both routes: the original torch
checkpoint, and the exported ONNX file executed by the consuming runtime
(literalize's evaluator).  A probe passes when the top-1 fill-mask tokens
agree and the top-1 log-probabilities differ by less than the tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .export import (
    ExportManifest,
    _load_checkpoint,
    masked_input_ids,
    reference_fill_mask,
    sha256_file,
)

LOGPROB_TOLERANCE = 1e-3


class SignatureMismatchError(Exception):
    pass


class ParityFailureError(Exception):
    def __init__(self, failures: list["ProbeComparison"]):
        lines = ", ".join(f"{f.sentence!r}" for f in failures)
        super().__init__(f"parity failed on {len(failures)} probe(s): {lines}")
        self.failures = failures


@dataclass
class ProbeComparison:
    sentence: str
    reference_top1: str
    exported_top1: str
    reference_logprob: float
    exported_logprob: float

    @property
    def delta(self) -> float:
        return abs(self.reference_logprob - self.exported_logprob)

    @property
    def passed(self) -> bool:
        return self.reference_top1 == self.exported_top1 and self.delta < LOGPROB_TOLERANCE


@dataclass
class ParityReport:
    model_name: str
    comparisons: list[ProbeComparison]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.comparisons)

    def to_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "passed": self.passed,
            "probes": [
                {
                    "sentence": c.sentence,
                    "reference_top1": c.reference_top1,
                    "exported_top1": c.exported_top1,
                    "delta_logprob": c.delta,
                    "passed": c.passed,
                }
                for c in self.comparisons
            ],
        }


def load_manifest(out_dir: Path) -> ExportManifest:
    path = out_dir / "manifest.json"
    if not path.is_file():
        raise FileNotFoundError(f"no manifest.json in {out_dir}")
    return ExportManifest.from_dict(json.loads(path.read_text(encoding="utf-8")))


def _check_signature(out_dir: Path, manifest: ExportManifest) -> None:
    from literalize.onnxlite import load_model

    for name, digest in (
        ("model.onnx", manifest.graph_sha256),
        ("vocab.txt", manifest.vocab_sha256),
    ):
        actual = sha256_file(out_dir / name)
        if actual != digest:
            raise SignatureMismatchError(
                f"{name} digest {actual[:12]}... does not match manifest"
            )
    model = load_model(out_dir / "model.onnx")
    expected_inputs = {"input_ids", "attention_mask", "token_type_ids"}
    if set(model.input_names) != expected_inputs:
        raise SignatureMismatchError(f"graph inputs {model.input_names}")
    if len(model.graph.outputs) != 1:
        raise SignatureMismatchError(f"graph outputs {model.output_names}")
    output = model.graph.outputs[0]
    if len(output.dims) != 3:
        raise SignatureMismatchError(
            f"output {output.name!r} has rank {len(output.dims)}, expected 3"
        )


def exported_fill_mask(runner, vocab, sentence: str):
    ids, mask_position = masked_input_ids(vocab, sentence)
    batch = np.asarray([ids], dtype=np.int64)
    (logits,) = runner.run(
        {
            "input_ids": batch,
            "attention_mask": np.ones_like(batch),
            "token_type_ids": np.zeros_like(batch),
        }
    ).values()
    row = logits[0, mask_position].astype(np.float64)
    log_probs = row - row.max() - np.log(np.exp(row - row.max()).sum())
    top = int(np.argmax(log_probs))
    return vocab.id_to_token[top], float(log_probs[top])


def verify_parity(out_dir: str | Path, probe_sentences: Sequence[str]) -> ParityReport:
    """Compare reference and exported fill-mask results; raise on failure."""
    from literalize.onnxlite import GraphRunner, load_model
    from literalize.wordpiece import load_vocab

    if not probe_sentences:
        raise ValueError("probe sentences are mandatory for parity verification")
    out_dir = Path(out_dir)
    manifest = load_manifest(out_dir)
    _check_signature(out_dir, manifest)

    reference_model = _load_checkpoint(manifest.model_name)
    vocab = load_vocab(out_dir / "vocab.txt")
    runner = GraphRunner(load_model(out_dir / "model.onnx"))

    comparisons = []
    for sentence in probe_sentences:
        reference = reference_fill_mask(reference_model, vocab, sentence)
        exported_token, exported_logprob = exported_fill_mask(runner, vocab, sentence)
        comparisons.append(
            ProbeComparison(
                sentence,
                reference.top1_token,
                exported_token,
                reference.top1_logprob,
                exported_logprob,
            )
        )
    report = ParityReport(manifest.model_name, comparisons)
    failures = [c for c in report.comparisons if not c.passed]
    if failures:
        raise ParityFailureError(failures)
    return report
