"""Candidate scoring backends over masked contexts.

Every backend estimates the probability of a candidate word filling the
mask slots of a MaskedContext.  A k-piece candidate is scored as the mean
of the per-slot log-probabilities read from a single forward evaluation of
the masked sequence; the mean keeps rankings comparable across candidates
of different piece counts.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .wordpiece import MaskedContext, Vocab, load_vocab

__all__ = [
    "BackendKind",
    "ScorerBackend",
    "CandidatePieces",
    "ScoredCandidate",
    "ScoringError",
    "BackendUnavailableError",
    "PieceCountMismatchError",
    "EmptyInputError",
    "Scorer",
    "UnigramFrequencyScorer",
    "NeuralGraphScorer",
    "RemoteHttpScorer",
    "make_scorer",
    "rank",
]


class BackendKind(str, Enum):
    NEURAL_GRAPH = "neural_graph"
    REMOTE_HTTP = "remote_http"
    UNIGRAM_FREQUENCY = "unigram_frequency"


@dataclass(frozen=True)
class ScorerBackend:
    """Backend selection plus its settings; exactly one backend per scorer."""

    kind: BackendKind
    graph_path: str | None = None
    vocab_path: str | None = None
    endpoint: str | None = None
    frequency_path: str | None = None
    batch_size: int = 32
    timeout: float = 30.0


@dataclass(frozen=True)
class CandidatePieces:
    candidate: str
    piece_ids: tuple[int, ...]


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: str
    log_prob: float


class ScoringError(Exception):
    pass


class BackendUnavailableError(ScoringError):
    pass


class PieceCountMismatchError(ScoringError):
    def __init__(self, candidate: str, pieces: int, mask_len: int):
        super().__init__(
            f"candidate {candidate!r} has {pieces} pieces but the context masks {mask_len}"
        )
        self.candidate = candidate


class EmptyInputError(ScoringError):
    pass


class Scorer:
    """Base scorer: validates the contract, serializes calls per instance."""

    def __init__(self, backend: ScorerBackend):
        self.backend = backend
        self._lock = threading.Lock()

    def score_batch(
        self, context: MaskedContext, candidates: Sequence[CandidatePieces]
    ) -> list[ScoredCandidate]:
        """One ScoredCandidate per input, order preserved."""
        if not candidates:
            raise EmptyInputError("score_batch requires at least one candidate")
        for cand in candidates:
            if len(cand.piece_ids) != context.mask_len:
                raise PieceCountMismatchError(
                    cand.candidate, len(cand.piece_ids), context.mask_len
                )
        with self._lock:
            return self._score(context, list(candidates))

    def _score(
        self, context: MaskedContext, candidates: list[CandidatePieces]
    ) -> list[ScoredCandidate]:
        raise NotImplementedError


class UnigramFrequencyScorer(Scorer):
    """Context-independent scorer from a token<TAB>count table.

    Exists so the full pipeline is exercisable without a neural model.
    Scores are Laplace-smoothed log relative frequencies of the candidate
    surface; the mask context is validated but otherwise ignored.
    """

    def __init__(self, backend: ScorerBackend):
        super().__init__(backend)
        if backend.frequency_path is None:
            raise BackendUnavailableError("frequency backend needs frequency_path")
        path = Path(backend.frequency_path)
        if not path.is_file():
            raise BackendUnavailableError(f"frequency table not found: {path}")
        self.counts: dict[str, float] = {}
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                token, _, count = line.partition("\t")
                try:
                    self.counts[token] = float(count)
                except ValueError:
                    raise BackendUnavailableError(
                        f"{path}:{line_no}: bad count {count!r}"
                    ) from None
        self._total = sum(self.counts.values())
        self._vocab_size = max(len(self.counts), 1)

    def log_frequency(self, token: str) -> float:
        count = self.counts.get(token, 0.0)
        return math.log((count + 1.0) / (self._total + self._vocab_size))

    def _score(self, context, candidates):
        return [
            ScoredCandidate(c.candidate, self.log_frequency(c.candidate))
            for c in candidates
        ]


class NeuralGraphScorer(Scorer):
    """Masked-LM scoring from a serialized ONNX inference graph.

    The graph must take input_ids/attention_mask/token_type_ids of shape
    [batch, seq] and produce logits [batch, seq, vocab].  All mask slots
    are read from one forward evaluation per context.
    """

    REQUIRED_INPUTS = ("input_ids", "attention_mask", "token_type_ids")

    def __init__(self, backend: ScorerBackend):
        super().__init__(backend)
        from .onnxlite import GraphRunner, load_model
        from .onnxlite.model import ModelFormatError
        from .onnxlite.runtime import UnsupportedOperatorError

        if backend.graph_path is None or backend.vocab_path is None:
            raise BackendUnavailableError("neural backend needs graph_path and vocab_path")
        graph_path = Path(backend.graph_path)
        if not graph_path.is_file():
            raise BackendUnavailableError(f"inference graph not found: {graph_path}")
        try:
            model = load_model(graph_path)
            self._runner = GraphRunner(model)
        except (ModelFormatError, UnsupportedOperatorError) as err:
            raise BackendUnavailableError(str(err)) from err
        names = set(model.input_names)
        if not set(self.REQUIRED_INPUTS) <= names or len(model.output_names) != 1:
            raise BackendUnavailableError(
                f"graph signature mismatch: inputs {sorted(names)}, outputs {model.output_names}"
            )
        self.vocab: Vocab = load_vocab(backend.vocab_path)

    def _forward(self, batch_ids: np.ndarray, attention: np.ndarray) -> np.ndarray:
        feeds = {
            "input_ids": batch_ids.astype(np.int64),
            "attention_mask": attention.astype(np.int64),
            "token_type_ids": np.zeros_like(batch_ids, dtype=np.int64),
        }
        (logits,) = self._runner.run(feeds).values()
        return logits

    def log_distributions(self, context: MaskedContext) -> np.ndarray:
        """Log-probabilities over the vocabulary at each mask slot: [mask_len, vocab]."""
        ids = np.asarray([context.ids], dtype=np.int64)
        logits = self._forward(ids, np.ones_like(ids))
        slots = logits[0, context.mask_start : context.mask_start + context.mask_len]
        shifted = slots - slots.max(axis=-1, keepdims=True)
        return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))

    def _score(self, context, candidates):
        return self._read_candidates(self.log_distributions(context), candidates)

    @staticmethod
    def _read_candidates(log_dist, candidates):
        vocab_size = log_dist.shape[-1]
        out = []
        for cand in candidates:
            if any(not 0 <= p < vocab_size for p in cand.piece_ids):
                raise ScoringError(
                    f"candidate {cand.candidate!r} has piece ids outside the vocabulary"
                )
            slot_scores = [log_dist[j, p] for j, p in enumerate(cand.piece_ids)]
            out.append(ScoredCandidate(cand.candidate, float(np.mean(slot_scores))))
        return out

    def score_contexts(
        self,
        items: Sequence[tuple[MaskedContext, Sequence[CandidatePieces]]],
    ) -> list[list[ScoredCandidate]]:
        """Score many (context, candidates) pairs, batching forward passes.

        Sequences are padded to a common length per batch window (size from
        the backend config) with the attention mask zeroed over padding;
        results are identical to scoring each context alone.
        """
        for context, candidates in items:
            if not candidates:
                raise EmptyInputError("every context needs at least one candidate")
            for cand in candidates:
                if len(cand.piece_ids) != context.mask_len:
                    raise PieceCountMismatchError(
                        cand.candidate, len(cand.piece_ids), context.mask_len
                    )
        out: list[list[ScoredCandidate]] = []
        with self._lock:
            step = max(1, self.backend.batch_size)
            for start in range(0, len(items), step):
                window = items[start : start + step]
                width = max(len(context.ids) for context, _ in window)
                ids = np.full((len(window), width), self.vocab.pad_id, dtype=np.int64)
                attention = np.zeros((len(window), width), dtype=np.int64)
                for row, (context, _) in enumerate(window):
                    ids[row, : len(context.ids)] = context.ids
                    attention[row, : len(context.ids)] = 1
                logits = self._forward(ids, attention)
                for row, (context, candidates) in enumerate(window):
                    slots = logits[
                        row, context.mask_start : context.mask_start + context.mask_len
                    ]
                    shifted = slots - slots.max(axis=-1, keepdims=True)
                    log_dist = shifted - np.log(
                        np.exp(shifted).sum(axis=-1, keepdims=True)
                    )
                    out.append(self._read_candidates(log_dist, list(candidates)))
        return out


class RemoteHttpScorer(Scorer):
    """Delegates scoring to a remote service speaking the /score protocol."""

    def __init__(self, backend: ScorerBackend):
        super().__init__(backend)
        if backend.endpoint is None:
            raise BackendUnavailableError("remote backend needs an endpoint URL")
        self.url = backend.endpoint.rstrip("/") + "/score"

    def _score(self, context, candidates):
        import requests

        payload = {
            "ids": list(context.ids),
            "mask_start": context.mask_start,
            "mask_len": context.mask_len,
            "candidates": [list(c.piece_ids) for c in candidates],
        }
        try:
            response = requests.post(self.url, json=payload, timeout=self.backend.timeout)
        except requests.RequestException as err:
            raise BackendUnavailableError(f"scoring endpoint unreachable: {err}") from err
        if response.status_code != 200:
            raise BackendUnavailableError(
                f"scoring endpoint returned HTTP {response.status_code}"
            )
        log_probs = response.json().get("log_probs")
        if not isinstance(log_probs, list) or len(log_probs) != len(candidates):
            raise BackendUnavailableError("malformed response from scoring endpoint")
        return [
            ScoredCandidate(c.candidate, float(lp))
            for c, lp in zip(candidates, log_probs)
        ]


def make_scorer(backend: ScorerBackend) -> Scorer:
    if backend.kind is BackendKind.UNIGRAM_FREQUENCY:
        return UnigramFrequencyScorer(backend)
    if backend.kind is BackendKind.NEURAL_GRAPH:
        return NeuralGraphScorer(backend)
    if backend.kind is BackendKind.REMOTE_HTTP:
        return RemoteHttpScorer(backend)
    raise ValueError(f"unknown backend kind {backend.kind!r}")


def rank(scored: Sequence[ScoredCandidate]) -> list[ScoredCandidate]:
    """Descending log-probability; ties broken by candidate string."""
    if not scored:
        raise EmptyInputError("rank requires a non-empty list")
    return sorted(scored, key=lambda s: (-s.log_prob, s.candidate))
