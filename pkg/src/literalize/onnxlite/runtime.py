"""Numpy evaluation of a parsed ONNX graph.

Covers the operator subset emitted for transformer encoders: embedding
gathers, matmuls, layer normalization, softmax attention and the erf-based
GELU, plus the shape plumbing around them.  Nodes are executed in graph
order, which ONNX requires to be topologically sorted.
"""

from __future__ import annotations

from typing import Callable, Mapping

import numpy as np
from scipy.special import erf

from .model import Graph, Node, NUMPY_DTYPES, OnnxModel

__all__ = ["GraphRunner", "UnsupportedOperatorError", "EvaluationError"]


class UnsupportedOperatorError(Exception):
    def __init__(self, ops: set[str]):
        super().__init__(f"graph uses unsupported operators: {sorted(ops)}")
        self.ops = ops


class EvaluationError(Exception):
    pass


def _reshape(data: np.ndarray, shape: np.ndarray) -> np.ndarray:
    target = []
    for axis, dim in enumerate(int(d) for d in shape):
        if dim == 0:
            target.append(data.shape[axis])
        else:
            target.append(dim)
    return data.reshape(target)


def _slice(values: list[np.ndarray]) -> np.ndarray:
    data, starts, ends = values[0], values[1], values[2]
    axes = values[3] if len(values) > 3 else np.arange(len(starts))
    steps = values[4] if len(values) > 4 else np.ones(len(starts), dtype=np.int64)
    index: list[slice] = [slice(None)] * data.ndim
    for start, end, axis, step in zip(starts, ends, axes, steps):
        index[int(axis)] = slice(int(start), int(end), int(step))
    return data[tuple(index)]


def _gemm(node: Node, a: np.ndarray, b: np.ndarray, c: np.ndarray | None) -> np.ndarray:
    alpha = node.attrs.get("alpha", 1.0)
    beta = node.attrs.get("beta", 1.0)
    if node.attrs.get("transA", 0):
        a = a.T
    if node.attrs.get("transB", 0):
        b = b.T
    out = alpha * (a @ b)
    if c is not None:
        out = out + beta * c
    return out


def _softmax(x: np.ndarray, axis: int) -> np.ndarray:
    shifted = x - np.max(x, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=axis, keepdims=True)


def _layer_norm(node: Node, values: list[np.ndarray]) -> np.ndarray:
    x, scale = values[0], values[1]
    bias = values[2] if len(values) > 2 else None
    axis = int(node.attrs.get("axis", -1))
    epsilon = node.attrs.get("epsilon", 1e-5)
    mean = x.mean(axis=axis, keepdims=True)
    variance = ((x - mean) ** 2).mean(axis=axis, keepdims=True)
    out = (x - mean) / np.sqrt(variance + epsilon) * scale
    if bias is not None:
        out = out + bias
    return out


def _reduce_mean(node: Node, values: list[np.ndarray]) -> np.ndarray:
    if len(values) > 1:
        axes = tuple(int(a) for a in values[1])
    else:
        axes = tuple(int(a) for a in node.attrs.get("axes", ()))
    keepdims = bool(node.attrs.get("keepdims", 1))
    return values[0].mean(axis=axes or None, keepdims=keepdims)


def _unsqueeze(node: Node, values: list[np.ndarray]) -> np.ndarray:
    if len(values) > 1:
        axes = [int(a) for a in values[1]]
    else:
        axes = [int(a) for a in node.attrs["axes"]]
    out = values[0]
    for axis in sorted(axes):
        out = np.expand_dims(out, axis)
    return out


def _squeeze(node: Node, values: list[np.ndarray]) -> np.ndarray:
    if len(values) > 1:
        axes = tuple(int(a) for a in values[1])
    elif "axes" in node.attrs:
        axes = tuple(int(a) for a in node.attrs["axes"])
    else:
        axes = None
    return np.squeeze(values[0], axis=axes)


class GraphRunner:
    """Executes a parsed ONNX model on numpy inputs."""

    def __init__(self, model: OnnxModel):
        self.model = model
        self.graph: Graph = model.graph
        unsupported = {
            node.op_type for node in self.graph.nodes if node.op_type not in _OPS
        }
        if unsupported:
            raise UnsupportedOperatorError(unsupported)

    def run(self, feeds: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
        values: dict[str, np.ndarray] = dict(self.graph.initializers)
        declared = {info.name for info in self.graph.inputs}
        for name, array in feeds.items():
            if name not in declared:
                raise EvaluationError(f"unexpected input {name!r}")
            values[name] = np.asarray(array)
        missing = declared - set(values)
        if missing:
            raise EvaluationError(f"missing inputs: {sorted(missing)}")

        for node in self.graph.nodes:
            args = []
            for input_name in node.inputs:
                if input_name == "":
                    args.append(None)
                elif input_name in values:
                    args.append(values[input_name])
                else:
                    raise EvaluationError(
                        f"node {node.name or node.op_type}: missing value {input_name!r}"
                    )
            try:
                results = _OPS[node.op_type](node, args)
            except (ValueError, IndexError, KeyError) as err:
                raise EvaluationError(
                    f"node {node.name or node.op_type} failed: {err}"
                ) from err
            if not isinstance(results, tuple):
                results = (results,)
            for output_name, result in zip(node.outputs, results):
                values[output_name] = result

        outputs = {}
        for info in self.graph.outputs:
            if info.name not in values:
                raise EvaluationError(f"graph output {info.name!r} was never produced")
            outputs[info.name] = values[info.name]
        return outputs


_OPS: dict[str, Callable[[Node, list], np.ndarray | tuple]] = {
    "Add": lambda n, v: v[0] + v[1],
    "Sub": lambda n, v: v[0] - v[1],
    "Mul": lambda n, v: v[0] * v[1],
    "Div": lambda n, v: v[0] / v[1],
    "MatMul": lambda n, v: v[0] @ v[1],
    "Gemm": lambda n, v: _gemm(n, v[0], v[1], v[2] if len(v) > 2 else None),
    "Gather": lambda n, v: np.take(v[0], v[1].astype(np.int64), axis=int(n.attrs.get("axis", 0))),
    "Transpose": lambda n, v: np.transpose(v[0], n.attrs.get("perm")),
    "Reshape": lambda n, v: _reshape(v[0], v[1]),
    "Softmax": lambda n, v: _softmax(v[0], int(n.attrs.get("axis", -1))),
    "Erf": lambda n, v: erf(v[0]).astype(v[0].dtype),
    "Tanh": lambda n, v: np.tanh(v[0]),
    "Sqrt": lambda n, v: np.sqrt(v[0]),
    "Pow": lambda n, v: np.power(v[0], v[1]),
    "Cast": lambda n, v: v[0].astype(NUMPY_DTYPES[int(n.attrs["to"])]),
    "LayerNormalization": _layer_norm,
    "ReduceMean": _reduce_mean,
    "Shape": lambda n, v: np.asarray(v[0].shape, dtype=np.int64),
    "Slice": lambda n, v: _slice(v),
    "Concat": lambda n, v: np.concatenate(v, axis=int(n.attrs["axis"])),
    "Unsqueeze": _unsqueeze,
    "Squeeze": _squeeze,
    "Identity": lambda n, v: v[0],
    "Constant": lambda n, v: n.attrs["value"],
    "ConstantOfShape": lambda n, v: np.full(
        tuple(int(d) for d in v[0]),
        n.attrs["value"].ravel()[0] if n.attrs.get("value") is not None else 0.0,
        dtype=n.attrs["value"].dtype if n.attrs.get("value") is not None else np.float32,
    ),
    "Expand": lambda n, v: np.broadcast_to(v[0], np.broadcast_shapes(v[0].shape, tuple(int(d) for d in v[1]))),
    "Where": lambda n, v: np.where(v[0], v[1], v[2]),
    "Equal": lambda n, v: v[0] == v[1],
    "Range": lambda n, v: np.arange(int(v[0]), int(v[1]), int(v[2]), dtype=np.int64),
}
