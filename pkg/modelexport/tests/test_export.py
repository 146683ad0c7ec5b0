import json
import os

import numpy as np
import pytest

from modelexport.bertgraph import ConversionFailedError, build_bert_mlm_graph
from modelexport.export import DEFAULT_PROBES, DownloadFailedError, export, sha256_file


@pytest.fixture(scope="module")
def exported(tiny_checkpoint, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("export")
    manifest = export(str(tiny_checkpoint), out_dir)
    return out_dir, manifest


class TestExport:
    def test_emits_all_three_files(self, exported):
        out_dir, _ = exported
        for name in ("model.onnx", "vocab.txt", "manifest.json"):
            assert (out_dir / name).is_file()

    def test_manifest_digests_match_files(self, exported):
        out_dir, manifest = exported
        assert manifest.graph_sha256 == sha256_file(out_dir / "model.onnx")
        assert manifest.vocab_sha256 == sha256_file(out_dir / "vocab.txt")

    def test_vocab_line_count_matches_manifest(self, exported):
        out_dir, manifest = exported
        lines = (out_dir / "vocab.txt").read_text(encoding="utf-8").splitlines()
        assert len(lines) == manifest.vocab_size

    def test_probe_results_recorded(self, exported):
        _, manifest = exported
        assert len(manifest.probe_results) == len(DEFAULT_PROBES)
        for probe in manifest.probe_results:
            assert probe.top1_token
            assert probe.top1_logprob <= 0.0

    def test_manifest_json_round_trips(self, exported):
        out_dir, manifest = exported
        stored = json.loads((out_dir / "manifest.json").read_text(encoding="utf-8"))
        assert stored == manifest.to_dict()

    def test_reexport_digests_identical(self, tiny_checkpoint, tmp_path, exported):
        _, first = exported
        second = export(str(tiny_checkpoint), tmp_path / "again")
        assert second.graph_sha256 == first.graph_sha256
        assert second.vocab_sha256 == first.vocab_sha256

    def test_nonexistent_model_is_download_failure(self, tmp_path):
        with pytest.raises(DownloadFailedError):
            export("/nonexistent/checkpoint-dir", tmp_path / "out")

    @pytest.mark.skipif(
        not os.environ.get("MODELEXPORT_BERT_LARGE"),
        reason="needs the published checkpoint: set MODELEXPORT_BERT_LARGE to a"
        " bert-large-cased directory (or hub name with network access)",
    )
    def test_published_checkpoint_vocab_size(self, tmp_path):
        manifest = export(os.environ["MODELEXPORT_BERT_LARGE"], tmp_path / "large")
        assert manifest.vocab_size == 28996
        assert manifest.max_seq == 512

    def test_probes_mandatory(self, tiny_checkpoint, tmp_path):
        with pytest.raises(ValueError):
            export(str(tiny_checkpoint), tmp_path / "out", probe_sentences=[])


class TestGraphBuilder:
    def test_unsupported_activation_rejected(self, tiny_checkpoint):
        from transformers import BertForMaskedLM

        model = BertForMaskedLM.from_pretrained(tiny_checkpoint)
        config = model.config.to_dict()
        config["hidden_act"] = "relu"
        state = {k: v.numpy() for k, v in model.state_dict().items()}
        with pytest.raises(ConversionFailedError, match="activation"):
            build_bert_mlm_graph(config, state)

    def test_missing_weight_rejected(self, tiny_checkpoint):
        from transformers import BertForMaskedLM

        model = BertForMaskedLM.from_pretrained(tiny_checkpoint)
        config = model.config.to_dict()
        state = {k: v.numpy() for k, v in model.state_dict().items()}
        state.pop("bert.embeddings.word_embeddings.weight")
        with pytest.raises(ConversionFailedError, match="lacks weight"):
            build_bert_mlm_graph(config, state)

    def test_graph_loads_in_consumer_runtime(self, tiny_checkpoint, tmp_path):
        from literalize.onnxlite import GraphRunner, load_model

        export(str(tiny_checkpoint), tmp_path)
        model = load_model(tmp_path / "model.onnx")
        assert model.opset_version == 17
        assert set(model.input_names) == {
            "input_ids", "attention_mask", "token_type_ids",
        }
        runner = GraphRunner(model)
        ids = np.array([[2, 7, 4, 3]], dtype=np.int64)
        out = runner.run(
            {
                "input_ids": ids,
                "attention_mask": np.ones_like(ids),
                "token_type_ids": np.zeros_like(ids),
            }
        )
        logits = out["logits"]
        assert logits.shape[0] == 1 and logits.shape[1] == 4
