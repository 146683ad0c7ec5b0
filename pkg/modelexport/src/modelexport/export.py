"""Checkpoint-to-ONNX export and the manifest contract.

Converts a pretrained BERT masked-LM checkpoint (hub name or local
directory) into the three files the scorer consumes: model.onnx,
vocab.txt and manifest.json.  The manifest records content digests and
reference fill-mask probe results computed with the original torch model,
so a re-export can be checked for drift.
"""

from __future__ import annotations

import hashlib
import json
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .bertgraph import ConversionFailedError, build_bert_mlm_graph

DEFAULT_PROBES = (
    "Am I supposed to [MASK] that story?",
    "She [MASK] for years to make a decent living.",
    "The committee will [MASK] the proposal tomorrow.",
    "He tried to [MASK] the heavy door.",
    "They [MASK] the results carefully.",
)

MAX_SEQ = 512


class DownloadFailedError(Exception):
    pass


@dataclass
class ProbeResult:
    sentence: str
    top1_token: str
    top1_logprob: float


@dataclass
class ExportManifest:
    model_name: str
    graph_sha256: str
    vocab_sha256: str
    max_seq: int
    vocab_size: int
    probe_results: list[ProbeResult] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "graph_sha256": self.graph_sha256,
            "vocab_sha256": self.vocab_sha256,
            "max_seq": self.max_seq,
            "vocab_size": self.vocab_size,
            "probe_results": [
                {
                    "sentence": p.sentence,
                    "top1_token": p.top1_token,
                    "top1_logprob": p.top1_logprob,
                }
                for p in self.probe_results
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExportManifest":
        probes = [
            ProbeResult(p["sentence"], p["top1_token"], p["top1_logprob"])
            for p in data.get("probe_results", [])
        ]
        return cls(
            data["model_name"],
            data["graph_sha256"],
            data["vocab_sha256"],
            data["max_seq"],
            data["vocab_size"],
            probes,
        )


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_checkpoint(model_name: str):
    import torch
    from transformers import BertForMaskedLM

    try:
        model = BertForMaskedLM.from_pretrained(model_name)
    except Exception as err:
        raise DownloadFailedError(f"cannot load checkpoint {model_name!r}: {err}") from err
    model.eval()
    return model


def _locate_vocab(model_name: str) -> Path:
    candidate = Path(model_name) / "vocab.txt"
    if candidate.is_file():
        return candidate
    try:
        from transformers.utils import cached_file

        return Path(cached_file(model_name, "vocab.txt"))
    except Exception as err:
        raise DownloadFailedError(
            f"cannot locate vocab.txt for {model_name!r}: {err}"
        ) from err


def masked_input_ids(vocab, sentence: str) -> tuple[list[int], int]:
    """Token ids for a probe sentence containing exactly one [MASK] marker."""
    from literalize.wordpiece import tokenize, tokens_to_ids

    before, sep, after = sentence.partition("[MASK]")
    if not sep or "[MASK]" in after:
        raise ValueError(f"probe must contain exactly one [MASK]: {sentence!r}")
    ids = [vocab.cls_id]
    ids += tokens_to_ids(vocab, tokenize(vocab, before))
    mask_position = len(ids)
    ids.append(vocab.mask_id)
    ids += tokens_to_ids(vocab, tokenize(vocab, after))
    ids.append(vocab.sep_id)
    return ids, mask_position


def reference_fill_mask(model, vocab, sentence: str) -> ProbeResult:
    """Top-1 fill-mask prediction from the original torch model."""
    import torch

    ids, mask_position = masked_input_ids(vocab, sentence)
    input_ids = torch.tensor([ids], dtype=torch.long)
    with torch.no_grad():
        logits = model(
            input_ids=input_ids,
            attention_mask=torch.ones_like(input_ids),
            token_type_ids=torch.zeros_like(input_ids),
        ).logits
    log_probs = torch.log_softmax(logits[0, mask_position].double(), dim=-1)
    top = int(torch.argmax(log_probs).item())
    return ProbeResult(sentence, vocab.id_to_token[top], float(log_probs[top].item()))


def export(
    model_name: str,
    out_dir: str | Path,
    probe_sentences: Sequence[str] = DEFAULT_PROBES,
) -> ExportManifest:
    """Emit model.onnx + vocab.txt + manifest.json for a checkpoint."""
    from literalize.wordpiece import load_vocab

    if not probe_sentences:
        raise ValueError("at least one probe sentence is required")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    model = _load_checkpoint(model_name)
    vocab_src = _locate_vocab(model_name)

    config = model.config.to_dict()
    state = {k: v.numpy() for k, v in model.state_dict().items()}
    graph_bytes = build_bert_mlm_graph(config, state)

    graph_path = out_dir / "model.onnx"
    graph_path.write_bytes(graph_bytes)
    vocab_path = out_dir / "vocab.txt"
    shutil.copyfile(vocab_src, vocab_path)

    vocab = load_vocab(vocab_path)
    if len(vocab) != int(config["vocab_size"]):
        raise ConversionFailedError(
            f"vocab.txt has {len(vocab)} entries, checkpoint expects {config['vocab_size']}"
        )

    probes = [reference_fill_mask(model, vocab, s) for s in probe_sentences]
    manifest = ExportManifest(
        model_name=str(model_name),
        graph_sha256=sha256_file(graph_path),
        vocab_sha256=sha256_file(vocab_path),
        max_seq=min(MAX_SEQ, int(config.get("max_position_embeddings", MAX_SEQ))),
        vocab_size=int(config["vocab_size"]),
        probe_results=probes,
    )
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest.to_dict(), handle, indent=2)
        handle.write("\n")
    return manifest
