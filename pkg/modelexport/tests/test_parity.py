"""Parity acceptance: exported graph vs reference model on probe sentences."""

import json

import numpy as np
import pytest

from modelexport.export import DEFAULT_PROBES, export
from modelexport.parity import (
    LOGPROB_TOLERANCE,
    ParityFailureError,
    SignatureMismatchError,
    verify_parity,
)


@pytest.fixture(scope="module")
def exported_dir(tiny_checkpoint, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("parity-export")
    export(str(tiny_checkpoint), out_dir)
    return out_dir


class TestVerifyParity:
    def test_five_probes_agree(self, exported_dir):
        report = verify_parity(exported_dir, DEFAULT_PROBES)
        assert report.passed
        assert len(report.comparisons) == 5
        agreements = sum(
            c.reference_top1 == c.exported_top1 for c in report.comparisons
        )
        assert agreements == 5
        max_delta = max(c.delta for c in report.comparisons)
        assert max_delta < LOGPROB_TOLERANCE
        print(
            f"\n[ACCEPTANCE] PASS parity: top-1 agreement {agreements}/5,"
            f" max |delta log-prob| {max_delta:.2e} < {LOGPROB_TOLERANCE}"
        )

    def test_digests_stable_across_two_exports(self, tiny_checkpoint, tmp_path):
        first = export(str(tiny_checkpoint), tmp_path / "a")
        second = export(str(tiny_checkpoint), tmp_path / "b")
        assert first.graph_sha256 == second.graph_sha256
        assert first.vocab_sha256 == second.vocab_sha256
        print("\n[ACCEPTANCE] PASS manifest digests stable across two exports")

    def test_empty_probe_list_is_an_error(self, exported_dir):
        with pytest.raises(ValueError, match="mandatory"):
            verify_parity(exported_dir, [])

    def test_report_is_deterministic(self, exported_dir):
        first = verify_parity(exported_dir, DEFAULT_PROBES).to_dict()
        second = verify_parity(exported_dir, DEFAULT_PROBES).to_dict()
        assert json.dumps(first) == json.dumps(second)

    def test_tampered_graph_is_signature_mismatch(self, tiny_checkpoint, tmp_path):
        out_dir = tmp_path / "tampered"
        export(str(tiny_checkpoint), out_dir)
        graph = out_dir / "model.onnx"
        graph.write_bytes(graph.read_bytes() + b"\x00")
        with pytest.raises(SignatureMismatchError, match="digest"):
            verify_parity(out_dir, DEFAULT_PROBES)

    def test_wrong_output_rank_is_signature_mismatch(self, tiny_checkpoint, tmp_path):
        from modelexport import wire
        from modelexport.export import sha256_file

        out_dir = tmp_path / "badrank"
        export(str(tiny_checkpoint), out_dir)
        # replace the graph with one whose output is rank 2
        bad = wire.model(
            wire.graph(
                nodes=[wire.node("Identity", ["input_ids"], ["logits"])],
                initializers=[],
                inputs=[
                    wire.value_info("input_ids", wire.DT_INT64, ("batch", "seq")),
                    wire.value_info("attention_mask", wire.DT_INT64, ("batch", "seq")),
                    wire.value_info("token_type_ids", wire.DT_INT64, ("batch", "seq")),
                ],
                outputs=[wire.value_info("logits", wire.DT_FLOAT, ("batch", "seq"))],
            )
        )
        (out_dir / "model.onnx").write_bytes(bad)
        manifest = json.loads((out_dir / "manifest.json").read_text())
        manifest["graph_sha256"] = sha256_file(out_dir / "model.onnx")
        (out_dir / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(SignatureMismatchError, match="rank"):
            verify_parity(out_dir, DEFAULT_PROBES)

    def test_reference_drift_is_parity_failure(self, tiny_checkpoint, tmp_path):
        import torch
        from transformers import BertForMaskedLM

        out_dir = tmp_path / "drift"
        export(str(tiny_checkpoint), out_dir)
        # re-point the manifest at a different checkpoint: same architecture,
        # different weights, so the reference route disagrees
        drifted_dir = tmp_path / "drifted-checkpoint"
        model = BertForMaskedLM.from_pretrained(tiny_checkpoint)
        torch.manual_seed(999)
        model.bert.embeddings.word_embeddings.weight.data.normal_()
        model.cls.predictions.decoder.weight.data.normal_()
        model.save_pretrained(drifted_dir)
        (drifted_dir / "vocab.txt").write_text(
            (tiny_checkpoint / "vocab.txt").read_text(encoding="utf-8"),
            encoding="utf-8",
        )
        manifest = json.loads((out_dir / "manifest.json").read_text())
        manifest["model_name"] = str(drifted_dir)
        (out_dir / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(ParityFailureError):
            verify_parity(out_dir, DEFAULT_PROBES)


class TestBatchedScoringThroughPrimary:
    def test_neural_scorer_consumes_the_export(self, exported_dir):
        """End-to-end: the primary's scorer runs the exported graph."""
        from literalize.scoring import BackendKind, ScorerBackend, make_scorer
        from literalize.scoring import CandidatePieces
        from literalize.wordpiece import MaskedContext, load_vocab

        vocab = load_vocab(exported_dir / "vocab.txt")
        scorer = make_scorer(
            ScorerBackend(
                kind=BackendKind.NEURAL_GRAPH,
                graph_path=str(exported_dir / "model.onnx"),
                vocab_path=str(exported_dir / "vocab.txt"),
            )
        )
        ids = [vocab.cls_id, vocab.token_to_id["she"], vocab.mask_id,
               vocab.token_to_id["that"], vocab.sep_id]
        context = MaskedContext(tuple(ids), 2, 1, ("she", "[MASK]", "that"))
        candidates = [
            CandidatePieces("believe", (vocab.token_to_id["believe"],)),
            CandidatePieces("push", (vocab.token_to_id["push"],)),
        ]
        scored = scorer.score_batch(context, candidates)
        assert len(scored) == 2
        assert all(np.isfinite(s.log_prob) and s.log_prob <= 0 for s in scored)
        # normalization at the mask slot
        log_dist = scorer.log_distributions(context)
        np.testing.assert_allclose(np.exp(log_dist).sum(axis=-1), [1.0], atol=1e-3)

    def test_padded_batching_matches_sequential(self, exported_dir):
        """Attention masking over padding must not change any score."""
        from literalize.scoring import BackendKind, ScorerBackend, make_scorer
        from literalize.scoring import CandidatePieces
        from literalize.wordpiece import MaskedContext, load_vocab

        vocab = load_vocab(exported_dir / "vocab.txt")
        scorer = make_scorer(
            ScorerBackend(
                kind=BackendKind.NEURAL_GRAPH,
                graph_path=str(exported_dir / "model.onnx"),
                vocab_path=str(exported_dir / "vocab.txt"),
                batch_size=2,
            )
        )
        w = vocab.token_to_id
        short = MaskedContext(
            (vocab.cls_id, w["she"], vocab.mask_id, vocab.sep_id), 2, 1, ("x",)
        )
        long = MaskedContext(
            (
                vocab.cls_id, w["am"], w["i"], w["supposed"], w["to"],
                vocab.mask_id, w["that"], w["story"], w["?"], vocab.sep_id,
            ),
            5, 1, ("y",),
        )
        candidates = [
            CandidatePieces("believe", (w["believe"],)),
            CandidatePieces("push", (w["push"],)),
        ]
        items = [(short, candidates), (long, candidates), (short, candidates)]
        batched = scorer.score_contexts(items)
        sequential = [scorer.score_batch(ctx, cands) for ctx, cands in items]
        for batch_row, seq_row in zip(batched, sequential):
            for a, b in zip(batch_row, seq_row):
                assert a.candidate == b.candidate
                assert a.log_prob == pytest.approx(b.log_prob, abs=1e-4)
