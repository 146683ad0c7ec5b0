"""BERT masked-LM architecture lowered to an ONNX graph.

Builds the standard encoder stack (embeddings + N transformer layers +
MLM head) from a checkpoint's configuration and weights.  The emitted
graph has the fixed external signature

    inputs : input_ids[batch, seq], attention_mask[batch, seq],
             token_type_ids[batch, seq]   (all int64)
    output : logits[batch, seq, vocab]    (float32)

at full 32-bit precision, using only operators the consuming runtime
evaluates (Gather, MatMul, LayerNormalization, Softmax, Erf and shape
plumbing).  GELU is emitted as its erf decomposition.
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from . import wire

SUPPORTED_ACTIVATIONS = ("gelu",)
FLOAT_MIN = float(np.finfo(np.float32).min)


class ConversionFailedError(Exception):
    pass


class _GraphBuilder:
    def __init__(self):
        self.nodes: list[bytes] = []
        self.initializers: list[bytes] = []
        self._counter = 0

    def fresh(self, stem: str) -> str:
        self._counter += 1
        return f"{stem}_{self._counter}"

    def init_tensor(self, name: str, array: np.ndarray) -> str:
        self.initializers.append(wire.tensor(name, array))
        return name

    def add(self, op: str, inputs: list[str], output: str | None = None, **attrs) -> str:
        output = output or self.fresh(op.lower())
        self.nodes.append(wire.node(op, inputs, [output], name=output, **attrs))
        return output


def _require(state: Mapping[str, np.ndarray], key: str) -> np.ndarray:
    if key not in state:
        raise ConversionFailedError(f"checkpoint lacks weight {key!r}")
    return np.asarray(state[key], dtype=np.float32)


def _linear(
    builder: _GraphBuilder,
    x: str,
    state: Mapping[str, np.ndarray],
    prefix: str,
    tag: str,
) -> str:
    weight = _require(state, prefix + ".weight")  # torch layout [out, in]
    bias = _require(state, prefix + ".bias")
    w_name = builder.init_tensor(f"{tag}_w", np.ascontiguousarray(weight.T))
    b_name = builder.init_tensor(f"{tag}_b", bias)
    mm = builder.add("MatMul", [x, w_name])
    return builder.add("Add", [mm, b_name])


def _layer_norm(
    builder: _GraphBuilder,
    x: str,
    state: Mapping[str, np.ndarray],
    prefix: str,
    tag: str,
    epsilon: float,
) -> str:
    gamma = builder.init_tensor(f"{tag}_gamma", _require(state, prefix + ".weight"))
    beta = builder.init_tensor(f"{tag}_beta", _require(state, prefix + ".bias"))
    return builder.add(
        "LayerNormalization", [x, gamma, beta], axis=-1, epsilon=float(epsilon)
    )


def _gelu(builder: _GraphBuilder, x: str) -> str:
    sqrt2 = builder.init_tensor(builder.fresh("sqrt2"), np.float32(math.sqrt(2.0)))
    one = builder.init_tensor(builder.fresh("one"), np.float32(1.0))
    half = builder.init_tensor(builder.fresh("half"), np.float32(0.5))
    scaled = builder.add("Div", [x, sqrt2])
    erf = builder.add("Erf", [scaled])
    shifted = builder.add("Add", [erf, one])
    prod = builder.add("Mul", [x, shifted])
    return builder.add("Mul", [prod, half])


def build_bert_mlm_graph(config: Mapping[str, object], state: Mapping[str, np.ndarray]) -> bytes:
    """Serialize the checkpoint as a standard ONNX model (opset 17)."""
    activation = config.get("hidden_act", "gelu")
    if activation not in SUPPORTED_ACTIVATIONS:
        raise ConversionFailedError(
            f"unsupported activation {activation!r}; expected one of {SUPPORTED_ACTIVATIONS}"
        )
    hidden = int(config["hidden_size"])
    layers = int(config["num_hidden_layers"])
    heads = int(config["num_attention_heads"])
    eps = float(config.get("layer_norm_eps", 1e-12))
    if hidden % heads:
        raise ConversionFailedError(f"hidden size {hidden} not divisible by {heads} heads")
    head_dim = hidden // heads

    b = _GraphBuilder()

    word_emb = b.init_tensor("word_embeddings", _require(state, "bert.embeddings.word_embeddings.weight"))
    type_emb = b.init_tensor("token_type_embeddings", _require(state, "bert.embeddings.token_type_embeddings.weight"))
    pos_emb = b.init_tensor("position_embeddings", _require(state, "bert.embeddings.position_embeddings.weight"))

    words = b.add("Gather", [word_emb, "input_ids"], axis=0)
    types = b.add("Gather", [type_emb, "token_type_ids"], axis=0)

    # position rows [0, seq) sliced out of the embedding table at run time
    shape = b.add("Shape", ["input_ids"])
    one_v = b.init_tensor("const_one_vec", np.array([1], dtype=np.int64))
    two_v = b.init_tensor("const_two_vec", np.array([2], dtype=np.int64))
    zero_v = b.init_tensor("const_zero_vec", np.array([0], dtype=np.int64))
    seq_len = b.add("Slice", [shape, one_v, two_v, zero_v])
    positions = b.add("Slice", [pos_emb, zero_v, seq_len, zero_v])

    summed = b.add("Add", [words, types])
    embedded = b.add("Add", [summed, positions])
    x = _layer_norm(b, embedded, state, "bert.embeddings.LayerNorm", "emb_ln", eps)

    # additive attention mask: (1 - mask) * float32_min, shaped [B,1,1,S]
    mask_f = b.add("Cast", ["attention_mask"], to=wire.DT_FLOAT)
    one_f = b.init_tensor("const_one_f", np.float32(1.0))
    min_f = b.init_tensor("const_min_f", np.float32(FLOAT_MIN))
    inverted = b.add("Sub", [one_f, mask_f])
    penalty = b.add("Mul", [inverted, min_f])
    mask_shape = b.init_tensor("mask_shape", np.array([0, 1, 1, -1], dtype=np.int64))
    extended_mask = b.add("Reshape", [penalty, mask_shape])

    split_shape = b.init_tensor("split_heads_shape", np.array([0, 0, heads, head_dim], dtype=np.int64))
    merge_shape = b.init_tensor("merge_heads_shape", np.array([0, 0, hidden], dtype=np.int64))
    scale = b.init_tensor("attn_scale", np.float32(math.sqrt(head_dim)))

    def to_heads(tensor_name: str) -> str:
        reshaped = b.add("Reshape", [tensor_name, split_shape])
        return b.add("Transpose", [reshaped], perm=(0, 2, 1, 3))

    for layer in range(layers):
        prefix = f"bert.encoder.layer.{layer}"
        q = to_heads(_linear(b, x, state, f"{prefix}.attention.self.query", f"l{layer}_q"))
        k = to_heads(_linear(b, x, state, f"{prefix}.attention.self.key", f"l{layer}_k"))
        v = to_heads(_linear(b, x, state, f"{prefix}.attention.self.value", f"l{layer}_v"))

        k_t = b.add("Transpose", [k], perm=(0, 1, 3, 2))
        scores = b.add("MatMul", [q, k_t])
        scaled = b.add("Div", [scores, scale])
        masked = b.add("Add", [scaled, extended_mask])
        probs = b.add("Softmax", [masked], axis=-1)
        context = b.add("MatMul", [probs, v])
        context = b.add("Transpose", [context], perm=(0, 2, 1, 3))
        context = b.add("Reshape", [context, merge_shape])

        attn_out = _linear(b, context, state, f"{prefix}.attention.output.dense", f"l{layer}_ao")
        residual = b.add("Add", [x, attn_out])
        x = _layer_norm(b, residual, state, f"{prefix}.attention.output.LayerNorm", f"l{layer}_ln1", eps)

        inter = _gelu(b, _linear(b, x, state, f"{prefix}.intermediate.dense", f"l{layer}_ff1"))
        ffn_out = _linear(b, inter, state, f"{prefix}.output.dense", f"l{layer}_ff2")
        residual = b.add("Add", [x, ffn_out])
        x = _layer_norm(b, residual, state, f"{prefix}.output.LayerNorm", f"l{layer}_ln2", eps)

    transformed = _gelu(b, _linear(b, x, state, "cls.predictions.transform.dense", "mlm_t"))
    transformed = _layer_norm(
        b, transformed, state, "cls.predictions.transform.LayerNorm", "mlm_ln", eps
    )
    decoder_w = b.init_tensor(
        "mlm_decoder_w",
        np.ascontiguousarray(_require(state, "cls.predictions.decoder.weight").T),
    )
    bias_key = (
        "cls.predictions.bias"
        if "cls.predictions.bias" in state
        else "cls.predictions.decoder.bias"
    )
    decoder_b = b.init_tensor("mlm_decoder_b", _require(state, bias_key))
    scores = b.add("MatMul", [transformed, decoder_w])
    b.nodes.append(wire.node("Add", [scores, decoder_b], ["logits"], name="logits"))

    vocab_size = int(config["vocab_size"])
    dims = ("batch", "seq")
    inputs = [
        wire.value_info("input_ids", wire.DT_INT64, dims),
        wire.value_info("attention_mask", wire.DT_INT64, dims),
        wire.value_info("token_type_ids", wire.DT_INT64, dims),
    ]
    outputs = [wire.value_info("logits", wire.DT_FLOAT, ("batch", "seq", vocab_size))]
    return wire.model(wire.graph(b.nodes, b.initializers, inputs, outputs))
