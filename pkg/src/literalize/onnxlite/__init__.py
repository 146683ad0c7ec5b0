"""Self-contained ONNX graph loading and CPU evaluation.

Reads the ONNX protobuf format directly (no protobuf dependency) and
executes the operator subset used by transformer encoder graphs with numpy.
"""

from .model import Graph, Node, OnnxModel, TensorInfo, load_model
from .runtime import GraphRunner, UnsupportedOperatorError

__all__ = [
    "OnnxModel",
    "Graph",
    "Node",
    "TensorInfo",
    "load_model",
    "GraphRunner",
    "UnsupportedOperatorError",
]
